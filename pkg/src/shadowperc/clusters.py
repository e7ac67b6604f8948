"""Connected components of level sets, box crossings and crossing-probability scans."""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass

import numpy as np

from ._backend import kernels
from .alpha import LevelSetMask, Side, compute_alpha, level_set
from .distributions import DistributionSpec, derive_seed
from .field import generate


class Adjacency(enum.Enum):
    ORTH = "orth"
    STAR = "star"

    @classmethod
    def parse(cls, value) -> "Adjacency":
        if isinstance(value, Adjacency):
            return value
        v = str(value).lower()
        if v in ("orth", "orthogonal"):
            return cls.ORTH
        if v in ("star", "*"):
            return cls.STAR
        raise ValueError(f"adjacency must be orth or star; got {value!r}")


class Axis(enum.Enum):
    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"

    @classmethod
    def parse(cls, value) -> "Axis":
        if isinstance(value, Axis):
            return value
        v = str(value).lower()
        if v in ("h", "horizontal", "lr"):
            return cls.HORIZONTAL
        if v in ("v", "vertical", "tb"):
            return cls.VERTICAL
        raise ValueError(f"axis must be horizontal or vertical; got {value!r}")


@dataclass(frozen=True, eq=False)
class ClusterLabeling:
    """``labels[j, i]`` in ``1..count`` for set cells, 0 elsewhere."""

    labels: np.ndarray
    count: int
    sizes: np.ndarray  # sizes[k] = cell count of label k; sizes[0] is background
    mode: Adjacency

    def partition(self):
        """The clusters as a set of frozensets of flat cell indices."""
        flat = self.labels.ravel()
        order = np.argsort(flat, kind="stable")
        bounds = np.searchsorted(flat[order], np.arange(1, self.count + 2))
        return {frozenset(order[bounds[k]:bounds[k + 1]].tolist()) for k in range(self.count)}


def _bits(mask) -> np.ndarray:
    return mask.bits if isinstance(mask, LevelSetMask) else np.asarray(mask, dtype=bool)


def label_clusters(mask, mode=Adjacency.ORTH) -> ClusterLabeling:
    """Union-find labeling; labels are numbered in row-major first-touch order."""
    mode = Adjacency.parse(mode)
    bits = _bits(mask)
    labels, count = kernels.label_components(bits.astype(np.uint8), mode is Adjacency.STAR)
    sizes = np.bincount(labels.ravel(), minlength=count + 1)
    sizes[0] = 0
    return ClusterLabeling(labels, int(count), sizes, mode)


def has_crossing(labeling: ClusterLabeling, axis=Axis.HORIZONTAL) -> bool:
    axis = Axis.parse(axis)
    lab = labeling.labels
    if lab.size == 0:
        return False
    if axis is Axis.HORIZONTAL:
        a, b = lab[:, 0], lab[:, -1]
    else:
        a, b = lab[0, :], lab[-1, :]
    common = np.intersect1d(a[a > 0], b[b > 0])
    return common.size > 0


def largest_cluster(labeling: ClusterLabeling):
    """``(label, size)`` of the biggest cluster, least label on ties; None if empty."""
    if labeling.count == 0:
        return None
    k = int(np.argmax(labeling.sizes[1:])) + 1
    return k, int(labeling.sizes[k])


@dataclass(frozen=True)
class CrossingEstimate:
    level: float
    side: str
    axis: str
    N: int
    successes: int
    p_hat: float
    stderr: float
    W: int
    H: int
    L: int
    seed: int
    adjacency: str = "orth"

    def to_dict(self) -> dict:
        return asdict(self)


CSV_COLUMNS = ("level", "side", "axis", "N", "successes", "p_hat", "stderr", "W", "H", "L", "seed")


def _estimate(level, side, axis, n, k, W, H, L, seed, mode) -> CrossingEstimate:
    p = k / n
    return CrossingEstimate(float(level), side.value, axis.value, n, k, p,
                            math.sqrt(p * (1 - p) / n), W, H, L, int(seed), mode.value)


def crossing_indicators(spec: DistributionSpec, W, H, L, levels, side, axis, N, master_seed,
                        mode=Adjacency.ORTH, threads: int = 1) -> np.ndarray:
    """Boolean array ``[sample, level]``; sample ``k`` uses the field seeded ``derive_seed(master_seed, k)``."""
    side, axis, mode = Side.parse(side), Axis.parse(axis), Adjacency.parse(mode)
    if N < 1:
        raise ValueError("need at least one sample")
    out = np.zeros((N, len(levels)), dtype=bool)
    for k in range(N):
        fld = generate(W, H, L, spec, derive_seed(master_seed, k), threads=threads)
        af = compute_alpha(fld, threads=threads)
        for m, lev in enumerate(levels):
            out[k, m] = has_crossing(label_clusters(level_set(af, lev, side), mode), axis)
    return out


def estimate_crossing(spec: DistributionSpec, W, H, L, level, side, axis, N, master_seed,
                      mode=Adjacency.ORTH, threads: int = 1) -> CrossingEstimate:
    return scan_levels(spec, W, H, L, [level], side, axis, N, master_seed, mode, threads)[0]


def scan_levels(spec: DistributionSpec, W, H, L, levels, side, axis, N, master_seed,
                mode=Adjacency.ORTH, threads: int = 1) -> list[CrossingEstimate]:
    """Crossing estimates at each level from the same N fields (common random numbers).

    Level-set inclusion then makes LE curves nondecreasing and GE curves
    nonincreasing sample by sample, not just on average.
    """
    levels = [float(x) for x in levels]
    if not levels:
        raise ValueError("need at least one level")
    if any(b < a for a, b in zip(levels, levels[1:])):
        raise ValueError("levels must be sorted ascending")
    side, axis, mode = Side.parse(side), Axis.parse(axis), Adjacency.parse(mode)
    ind = crossing_indicators(spec, W, H, L, levels, side, axis, N, master_seed, mode, threads)
    return [_estimate(lev, side, axis, N, int(ind[:, m].sum()), W, H, L, master_seed, mode)
            for m, lev in enumerate(levels)]
