"""Recovering heights from the slope field alone.

Per row, ``T(u)`` is the first cell east of ``u`` whose slope is not larger
than the slope at ``u``; it is also the least cell realizing the slope at
``u``, so ``Y(T(u)) - Y(u) = alpha(u) * (T(u) - u)``. Walking the chain
``0, T(0), T(T(0)), ...`` and then filling each gap right to left recovers
``X - X(0, j)`` on the row. Subtracting the running average of the result
then gives ``X`` up to the mean of the law.

Only the slope values are consumed; the maximizer offsets stored on an
:class:`~shadowperc.alpha.AlphaField` are never read here.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._backend import kernels


class Status(enum.Enum):
    OK = "ok"
    BAD = "bad_configuration"


class RowReconstruction(NamedTuple):
    values: np.ndarray  # Y on [0, stop)
    stop: int
    status: Status


@dataclass(frozen=True, eq=False)
class ReconstructionResult:
    """Per-row recovered values; cells outside ``[lo[j], hi[j])`` are NaN."""

    values: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    status: list
    mean_mode: str = "none"
    averaging_length: np.ndarray | None = None
    target: str = "X - X(0,j)"

    @property
    def ok(self) -> bool:
        return all(s is Status.OK for s in self.status)

    def sidecar(self) -> dict:
        return {
            "status": [s.value for s in self.status],
            "valid_ranges": [[int(a), int(b)] for a, b in zip(self.lo, self.hi)],
            "mean_mode": self.mean_mode,
            "averaging_length": None if self.averaging_length is None
            else [int(n) for n in self.averaging_length],
            "target": self.target,
        }


def tau(row, u: int, v: int) -> float:
    """Slope of the chord from ``u`` to ``v``."""
    if not u < v:
        raise ValueError("tau needs u < v")
    return (float(row[v]) - float(row[u])) / (v - u)


def next_le_indices(alpha_row) -> np.ndarray:
    """For each ``u`` the least ``v > u`` with ``alpha_row[v] <= alpha_row[u]``, or -1."""
    return kernels.next_smaller_or_equal(alpha_row)


def t_next(alpha_row, u: int):
    a = np.asarray(alpha_row, dtype=np.float64)
    if not 0 <= u < a.shape[0]:
        raise IndexError(f"u={u} outside [0, {a.shape[0]})")
    hit = np.flatnonzero(a[u + 1:] <= a[u])
    return int(u + 1 + hit[0]) if hit.size else None


def psi0_row(alpha_row, terminal: bool = False) -> RowReconstruction:
    """Recover ``Y = X - X(0)`` on one row from its slopes.

    With ``terminal=True`` the slopes are those of a complete finite row
    (one entry per column except the last) and the final column, whose
    suffix is empty, closes every chain; the output then covers all
    ``len(alpha_row) + 1`` columns.
    """
    a = np.asarray(alpha_row, dtype=np.float64)
    if a.ndim != 1 or a.shape[0] == 0:
        raise ValueError("alpha_row must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(a)):
        return RowReconstruction(np.zeros(0), 0, Status.BAD)
    if terminal:
        ext = np.append(a, -np.inf)
    else:
        ext = a
    n = ext.shape[0]
    if n == 1:
        return RowReconstruction(np.zeros(1), 1, Status.OK)

    nxt = next_le_indices(ext).tolist()
    al = a.tolist()
    chain = [0]
    while nxt[chain[-1]] >= 0:
        chain.append(nxt[chain[-1]])
    if len(chain) == 1:
        # the anchor has no in-window shadow caster
        return RowReconstruction(np.zeros(1), 1, Status.BAD)

    stop = chain[-1] + 1
    y = [0.0] * stop
    for x0, x1 in zip(chain, chain[1:]):
        y[x1] = y[x0] + (x1 - x0) * al[x0]
    for x0, x1 in zip(chain, chain[1:]):
        for x in range(x1 - 1, x0, -1):
            t = nxt[x]
            if t < 0 or t > x1:
                return RowReconstruction(np.array(y[:x0 + 1]), x0 + 1, Status.BAD)
            y[x] = y[t] - al[x] * (t - x)
    return RowReconstruction(np.array(y), stop, Status.OK)


def psi0(alpha_field) -> ReconstructionResult:
    """Row-by-row :func:`psi0_row` over an AlphaField (or a 2-D array of slopes)."""
    a = np.asarray(getattr(alpha_field, "alpha", alpha_field), dtype=np.float64)
    H, W = a.shape
    values = np.full((H, W), np.nan)
    lo = np.zeros(H, dtype=np.int64)
    hi = np.zeros(H, dtype=np.int64)
    status = []
    for j in range(H):
        rec = psi0_row(a[j])
        values[j, :rec.stop] = rec.values
        hi[j] = rec.stop if rec.status is Status.OK else 0
        if rec.status is not Status.OK:
            values[j, :] = np.nan
        status.append(rec.status)
    return ReconstructionResult(values, lo, hi, status)


def psi_row(y, mean_mode: str = "empirical", mu: float | None = None):
    """Subtract the average of ``y[1:]`` from a recovered row.

    ``empirical``: estimates ``X - mean``. ``known``: adds ``mu`` back and
    estimates ``X`` itself. Returns ``(values, averaging_length)``.
    """
    y = np.asarray(y, dtype=np.float64)
    n = y.shape[0] - 1
    if n < 1:
        raise ValueError("empty averaging range")
    out = y - math.fsum(y[1:].tolist()) / n
    if mean_mode == "known":
        if mu is None:
            raise ValueError("known mean mode needs mu")
        out = out + mu
    elif mean_mode != "empirical":
        raise ValueError(f"mean_mode must be 'empirical' or 'known', got {mean_mode!r}")
    return out, n


def psi(alpha_field, mean_mode: str = "empirical", mu: float | None = None) -> ReconstructionResult:
    """Per-row mean correction of :func:`psi0`.

    Each row is anchored at its own ``X(0, j)``, so the correction is
    necessarily per row; rows whose valid range holds fewer than two
    columns are marked bad.
    """
    base = alpha_field if isinstance(alpha_field, ReconstructionResult) else psi0(alpha_field)
    values = np.full_like(base.values, np.nan)
    hi = base.hi.copy()
    counts = np.zeros_like(base.hi)
    status = list(base.status)
    for j in range(values.shape[0]):
        if status[j] is not Status.OK or hi[j] - base.lo[j] < 2:
            status[j] = Status.BAD
            hi[j] = 0
            continue
        row, counts[j] = psi_row(base.values[j, base.lo[j]:hi[j]], mean_mode, mu)
        values[j, base.lo[j]:hi[j]] = row
    target = "X" if mean_mode == "known" else "X - mean"
    return ReconstructionResult(values, base.lo.copy(), hi, status, mean_mode, counts, target)
