"""Shadow-slope field, the shadow relation and level sets.

For a cell ``u`` the slope field is the largest slope from ``u`` to a cell
further east in the same row,

    alpha_L(u) = max_{1 <= r <= L} (X(u + r e1) - X(u)) / r,

and ``u`` is lit by a sun of slope ``l`` exactly when ``alpha(u) <= l``.
Only the truncated field is ever computed; ``L`` is the lookahead of the
source field.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .distributions import DistributionSpec
from .field import HeightField


class Side(enum.Enum):
    LE = "le"
    GE = "ge"
    GT = "gt"
    LT = "lt"

    @classmethod
    def parse(cls, value) -> "Side":
        if isinstance(value, Side):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"side must be one of le, ge, gt, lt; got {value!r}") from None


@dataclass(frozen=True, eq=False)
class AlphaField:
    """``alpha[j, i]`` and the least maximizing offset ``offset[j, i]`` in ``[1, truncation]``."""

    width: int
    rows: int
    alpha: np.ndarray
    offset: np.ndarray
    truncation: int
    source_seed: int
    source_spec: DistributionSpec
    source_lookahead: int = 0

    def __post_init__(self):
        a = np.array(self.alpha, dtype=np.float64)
        o = np.array(self.offset, dtype=np.int64)
        if a.shape != (self.rows, self.width) or o.shape != a.shape:
            raise ValueError("alpha/offset shapes must be (rows, width)")
        if not np.all(np.isfinite(a)):
            raise ValueError("alpha values must be finite")
        a.flags.writeable = False
        o.flags.writeable = False
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "offset", o)


@dataclass(frozen=True, eq=False)
class LevelSetMask:
    bits: np.ndarray
    level: float
    side: Side

    @property
    def shape(self):
        return self.bits.shape


def _check_level(level) -> float:
    level = float(level)
    if math.isnan(level):
        raise ValueError("level must not be NaN")
    return level


# ---------------------------------------------------------------------------
# row kernels

def alpha_row_naive(row, R: int):
    """Reference O(n R) truncated slopes for ``u`` in ``[0, n - R)``."""
    y = np.asarray(row, dtype=np.float64)
    n = y.shape[0]
    if R < 1 or R >= n:
        raise ValueError(f"need 1 <= R < len(row); got R={R}, len={n}")
    m = n - R
    best = y[1:m + 1] - y[:m]
    best_r = np.ones(m, dtype=np.int64)
    for r in range(2, R + 1):
        s = (y[r:r + m] - y[:m]) / r
        better = s > best
        best = np.where(better, s, best)
        best_r = np.where(better, r, best_r)
    return best, best_r


def alpha_row_hull(row):
    """Slopes over the entire available suffix for ``u`` in ``[0, n - 1)``.

    Sweeps right to left keeping the upper convex hull of the points already
    seen; the tangent from the new point is found by popping the vertices
    it hides, so the whole row costs amortized O(n).
    """
    return kernels.suffix_max_slope(row)


def alpha_rows(rows, width: int, horizon: int):
    """Truncated slopes for the first ``width`` columns of every row of a 2-D array."""
    return kernels.truncated_max_slope(rows, int(width), int(horizon))


# ---------------------------------------------------------------------------
# fields

def compute_alpha(field: HeightField, truncation: int | None = None, *, threads: int = 1) -> AlphaField:
    """Slope field on the window, looking at most ``truncation`` cells east.

    ``truncation`` defaults to the field's lookahead and may not exceed it.
    """
    L = field.lookahead if truncation is None else int(truncation)
    if not 1 <= L <= field.lookahead:
        raise ValueError(f"truncation {L} outside [1, lookahead={field.lookahead}]")
    h = field.heights
    if threads > 1 and field.rows > 1:
        chunks = np.array_split(np.arange(field.rows), min(threads, field.rows))
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda idx: alpha_rows(h[idx], field.width, L), chunks))
        a = np.concatenate([p[0] for p in parts])
        o = np.concatenate([p[1] for p in parts])
    else:
        a, o = alpha_rows(h, field.width, L)
    return AlphaField(field.width, field.rows, a, o, L, field.seed, field.spec, field.lookahead)


def is_lit(alpha_field: AlphaField, u, level: float) -> bool:
    level = _check_level(level)
    i, j = u
    if not (0 <= i < alpha_field.width and 0 <= j < alpha_field.rows):
        raise IndexError(f"cell {u} outside the window")
    return bool(alpha_field.alpha[j, i] <= level)


def casts_shadow(row, i: int, j: int, level: float) -> bool:
    """``i <_l j``: the height at ``j`` is strictly above the ray of slope ``level`` through ``i``."""
    if not i < j:
        raise ValueError("casts_shadow needs i < j")
    return bool(row[j] > row[i] + (j - i) * level)


def t_level_index(row, i: int, level: float):
    """Least ``j > i`` maximizing ``row[j] - (j - i) * level``."""
    y = np.asarray(row, dtype=np.float64)
    if not 0 <= i < y.shape[0] - 1:
        raise ValueError("t_level_index needs a non-empty suffix after i")
    vals = y[i + 1:] - np.arange(1, y.shape[0] - i) * float(level)
    return i + 1 + int(np.argmax(vals))


def level_set(alpha_field: AlphaField, level: float, side) -> LevelSetMask:
    level = _check_level(level)
    side = Side.parse(side)
    a = alpha_field.alpha
    if side is Side.LE:
        bits = a <= level
    elif side is Side.GE:
        bits = a >= level
    elif side is Side.GT:
        bits = a > level
    else:
        bits = a < level
    return LevelSetMask(bits, level, side)


def truncation_stability(field: HeightField, level: float, L1: int, L2: int) -> float:
    """Fraction of window cells whose lit status at ``level`` changes between truncations."""
    level = _check_level(level)
    if not 1 <= L1 <= L2:
        raise ValueError("need 1 <= L1 <= L2")
    if L2 > field.lookahead:
        raise ValueError(f"L2={L2} exceeds lookahead {field.lookahead}")
    a1 = compute_alpha(field, L1).alpha
    a2 = a1 if L2 == L1 else compute_alpha(field, L2).alpha
    return float(np.mean((a1 <= level) != (a2 <= level)))
