"""Brute-force references for the fast kernels.

Everything here is written straight from the definitions with plain loops
and shares no code with the modules it checks. Sizes are kept small (rows up
to a few thousand entries, masks up to 256 x 256).
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import asdict, dataclass
from itertools import permutations

import numpy as np

from .distributions import DistributionSpec, gaussian, sample_array, substream
from .field import HeightField


@dataclass(frozen=True)
class OracleReport:
    name: str
    instance: str
    reference: float
    candidate: float
    difference: float
    tolerance: float
    passed: bool

    @classmethod
    def compare(cls, name, instance, reference, candidate, tolerance=0.0):
        diff = abs(float(candidate) - float(reference))
        return cls(name, instance, float(reference), float(candidate), diff, float(tolerance),
                   bool(diff <= tolerance))

    def to_dict(self) -> dict:
        return asdict(self)


def brute_alpha(row, u: int, R: int):
    """``(max_r (row[u+r] - row[u]) / r, least such r)`` over ``1 <= r <= R``."""
    if u + R >= len(row):
        raise ValueError("u + R must lie inside the row")
    best, best_r = None, None
    for r in range(1, R + 1):
        s = (float(row[u + r]) - float(row[u])) / r
        if best is None or s > best:
            best, best_r = s, r
    return best, best_r


def brute_T(row, u: int, level: float) -> int:
    """Least ``j > u`` maximizing ``row[j] - (j - u) * level``."""
    if u >= len(row) - 1:
        raise ValueError("u must have a non-empty suffix")
    best, best_j = None, None
    for j in range(u + 1, len(row)):
        v = float(row[j]) - (j - u) * level
        if best is None or v > best:
            best, best_j = v, j
    return best_j


def flood_fill(mask, mode="orth"):
    """BFS labeling with the same contract as ``clusters.label_clusters``."""
    from .clusters import Adjacency, ClusterLabeling

    mode = Adjacency.parse(mode)
    bits = np.asarray(getattr(mask, "bits", mask), dtype=bool)
    H, W = bits.shape
    if mode is Adjacency.STAR:
        steps = [(di, dj) for di in (-1, 0, 1) for dj in (-1, 0, 1) if (di, dj) != (0, 0)]
    else:
        steps = [(1, 0), (-1, 0), (0, 1), (0, -1)]
    labels = np.zeros((H, W), dtype=np.int32)
    count = 0
    for j in range(H):
        for i in range(W):
            if not bits[j, i] or labels[j, i]:
                continue
            count += 1
            labels[j, i] = count
            queue = deque([(i, j)])
            while queue:
                ci, cj = queue.popleft()
                for di, dj in steps:
                    ni, nj = ci + di, cj + dj
                    if 0 <= ni < W and 0 <= nj < H and bits[nj, ni] and not labels[nj, ni]:
                        labels[nj, ni] = count
                        queue.append((ni, nj))
    sizes = np.bincount(labels.ravel(), minlength=count + 1)
    sizes[0] = 0
    return ClusterLabeling(labels, count, sizes, mode)


def ordering_symmetry_check(n: int, spec: DistributionSpec | None = None, N: int = 100_000,
                            seed: int = 0, sigmas: float = 5.0) -> OracleReport:
    """Frequency of every one of the n! orderings of n i.i.d. draws vs 1/n!.

    Reports the worst ordering; it passes when every frequency lies within
    ``sigmas`` binomial standard errors of 1/n!.
    """
    if not 2 <= n <= 6:
        raise ValueError("ordering_symmetry_check supports 2 <= n <= 6")
    spec = spec or gaussian()
    x = sample_array(spec, substream(seed, 0), (N, n))
    order = np.argsort(x, axis=1, kind="stable")
    codes = (order * (n ** np.arange(n))).sum(axis=1)
    index = {sum(p[k] * n ** k for k in range(n)): m for m, p in enumerate(permutations(range(n)))}
    counts = np.zeros(len(index), dtype=np.int64)
    uniq, cnt = np.unique(codes, return_counts=True)
    for c, k in zip(uniq.tolist(), cnt.tolist()):
        counts[index[c]] += k
    p = 1.0 / math.factorial(n)
    freqs = counts / N
    worst = int(np.argmax(np.abs(freqs - p)))
    tol = sigmas * math.sqrt(p * (1 - p) / N)
    return OracleReport.compare(f"ordering_symmetry_n{n}", f"N={N}, seed={seed}, {spec.kind}",
                                p, freqs[worst], tol)


def counterexample_pair(width: int, lookahead: int | None = None):
    """Two height fields, zero everywhere vs a downward step, with equal slope fields.

    The step field is 1 on columns ``0..width`` (the window plus the first
    margin column) and 0 beyond, so every window cell still sees a later cell
    of equal height while the heights differ by a non-constant amount on the
    stored grid.
    """
    if width < 2:
        raise ValueError("width must be >= 2")
    L = max(2, width if lookahead is None else int(lookahead))
    if L < 2:
        raise ValueError("lookahead must be >= 2")
    flat = np.zeros((1, width + L))
    step = np.zeros((1, width + L))
    step[0, :width + 1] = 1.0
    spec = gaussian()
    return HeightField(width, 1, L, flat, 0, spec), HeightField(width, 1, L, step, 0, spec)


def _random_rows(rng, count, n):
    return rng.standard_normal((count, n))


def selftest(seed: int = 2024, scale: float = 1.0) -> list[OracleReport]:
    """Cross-check every fast kernel against its oracle on small random instances."""
    from . import alpha as alpha_mod
    from . import clusters, reconstruct

    rng = substream(seed, 99)
    reports = []
    nrows = max(1, int(50 * scale))

    worst_v, worst_off = 0.0, 0
    for _ in range(nrows):
        row = _random_rows(rng, 1, 128)[0]
        vals, offs = alpha_mod.alpha_row_hull(row)
        for u in range(len(row) - 1):
            bv, br = brute_alpha(row, u, len(row) - 1 - u)
            worst_v = max(worst_v, abs(bv - vals[u]))
            worst_off = max(worst_off, abs(br - int(offs[u])))
    reports.append(OracleReport.compare("hull_alpha_value", f"{nrows} rows x 128", 0.0, worst_v, 1e-12))
    reports.append(OracleReport.compare("hull_alpha_offset", f"{nrows} rows x 128", 0, worst_off, 0))

    worst_v, worst_off = 0.0, 0
    H, W, R = 8, 48, 16
    heights = _random_rows(rng, H, W + R)
    a, o = alpha_mod.alpha_rows(heights, W, R)
    for j in range(H):
        for u in range(W):
            bv, br = brute_alpha(heights[j], u, R)
            worst_v = max(worst_v, abs(bv - a[j, u]))
            worst_off = max(worst_off, abs(br - int(o[j, u])))
    reports.append(OracleReport.compare("truncated_alpha_value", f"{H}x{W}, R={R}", 0.0, worst_v, 1e-12))
    reports.append(OracleReport.compare("truncated_alpha_offset", f"{H}x{W}, R={R}", 0, worst_off, 0))

    mismatches = 0
    nmasks = max(1, int(20 * scale))
    for k in range(nmasks):
        mask = rng.random((32, 32)) < 0.4 + 0.2 * (k % 3) / 2
        for mode in ("orth", "star"):
            if clusters.label_clusters(mask, mode).partition() != flood_fill(mask, mode).partition():
                mismatches += 1
    reports.append(OracleReport.compare("union_find_vs_flood_fill", f"{nmasks} masks 32x32, both modes",
                                        0, mismatches, 0))

    mismatches = 0
    for _ in range(nrows):
        row = _random_rows(rng, 1, 64)[0]
        vals, _ = alpha_mod.alpha_row_hull(row)
        nxt = reconstruct.next_le_indices(vals)
        for u in range(len(vals)):
            if nxt[u] >= 0 and brute_T(row, u, vals[u]) != nxt[u]:
                mismatches += 1
    reports.append(OracleReport.compare("t_next_vs_brute_T", f"{nrows} rows x 64", 0, mismatches, 0))

    mismatches = 0
    for _ in range(nrows):
        row = _random_rows(rng, 1, 64)[0]
        lev = float(rng.uniform(0.05, 2.0))
        for u in range(0, 63, 7):
            if alpha_mod.t_level_index(row, u, lev) != brute_T(row, u, lev):
                mismatches += 1
    reports.append(OracleReport.compare("t_level_index_vs_brute_T", f"{nrows} rows x 64", 0, mismatches, 0))

    reports.append(ordering_symmetry_check(3, N=max(1000, int(60_000 * scale)), seed=seed))
    return reports
