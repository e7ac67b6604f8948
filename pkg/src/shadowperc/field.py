"""I.i.d. height fields on a finite window with an eastward lookahead margin."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .distributions import DistributionSpec, sample_array, substream

# (W + L) * H cells; 2**28 doubles is 2 GiB
DEFAULT_MAX_CELLS = 1 << 28


class CapacityError(ValueError):
    """Requested field exceeds the configured memory budget."""


@dataclass(frozen=True, eq=False)
class HeightField:
    """Heights ``X(i, j)`` stored row-major as ``heights[j, i]``.

    Columns ``[0, width)`` form the window where slopes are evaluated; the
    ``lookahead`` columns east of it only cast shadows.
    """

    width: int
    rows: int
    lookahead: int
    heights: np.ndarray
    seed: int
    spec: DistributionSpec

    def __post_init__(self):
        _check_dims(self.width, self.rows, self.lookahead)
        h = np.ascontiguousarray(self.heights, dtype=np.float64)
        if h.shape != (self.rows, self.width + self.lookahead):
            raise ValueError(
                f"heights shape {h.shape} does not match rows={self.rows}, "
                f"width+lookahead={self.width + self.lookahead}"
            )
        if not np.all(np.isfinite(h)):
            raise ValueError("heights must be finite")
        if h is self.heights:
            h = h.copy()
        h.flags.writeable = False
        object.__setattr__(self, "heights", h)

    @property
    def ncols(self) -> int:
        return self.width + self.lookahead

    def row_slice(self, j: int) -> np.ndarray:
        """Row ``j`` west to east, length ``width + lookahead`` (read-only view)."""
        if not 0 <= j < self.rows:
            raise IndexError(f"row {j} out of range [0, {self.rows})")
        return self.heights[j]

    def height_at(self, i: int, j: int) -> float:
        if not (0 <= i < self.ncols and 0 <= j < self.rows):
            raise IndexError(f"cell ({i}, {j}) outside {self.ncols}x{self.rows} grid")
        return float(self.heights[j, i])

    def __eq__(self, other):
        if not isinstance(other, HeightField):
            return NotImplemented
        return (
            (self.width, self.rows, self.lookahead, self.seed, self.spec)
            == (other.width, other.rows, other.lookahead, other.seed, other.spec)
            and np.array_equal(self.heights, other.heights)
        )


def _check_dims(W, H, L):
    for name, v in (("width", W), ("rows", H), ("lookahead", L)):
        if int(v) != v or v < 1:
            raise ValueError(f"{name} must be a positive integer, got {v!r}")


def generate(W: int, H: int, L: int, spec: DistributionSpec, seed: int, *,
             threads: int = 1, max_cells: int = DEFAULT_MAX_CELLS) -> HeightField:
    """Fill a ``H x (W + L)`` grid with i.i.d. draws from ``spec``.

    Row ``j`` is drawn from ``substream(seed, j)``, so the result does not
    depend on ``threads``.
    """
    _check_dims(W, H, L)
    ncols = W + L
    if ncols * H > max_cells:
        raise CapacityError(f"{ncols}x{H} grid exceeds budget of {max_cells} cells")
    heights = np.empty((H, ncols), dtype=np.float64)

    def fill(j):
        heights[j] = sample_array(spec, substream(seed, j), ncols)

    if threads > 1 and H > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(fill, range(H)))
    else:
        for j in range(H):
            fill(j)
    return HeightField(W, H, L, heights, int(seed), spec)


def from_array(heights, width: int, spec: DistributionSpec, seed: int = 0) -> HeightField:
    """Wrap explicit heights; the columns past ``width`` become the margin."""
    h = np.atleast_2d(np.asarray(heights, dtype=np.float64))
    return HeightField(int(width), h.shape[0], h.shape[1] - int(width), h, int(seed), spec)
