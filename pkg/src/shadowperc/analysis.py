"""Closed-form probabilities and bounds of the model, with Monte Carlo checks.

The Monte Carlo helpers draw samples in fixed-size batches; batch ``c`` uses
``substream(seed, c)``, so estimates are reproducible from ``seed`` and two
calls sharing a seed see the same samples (common random numbers).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .alpha import alpha_rows
from .distributions import DistributionSpec, gaussian, sample_array, substream

BATCH = 10_000
EXACT_LIMIT = 20


@dataclass(frozen=True)
class MCEstimate:
    successes: int
    samples: int

    @property
    def p_hat(self) -> float:
        return self.successes / self.samples if self.samples else 1.0

    @property
    def stderr(self) -> float:
        if not self.samples:
            return 0.0
        p = self.p_hat
        return math.sqrt(p * (1 - p) / self.samples)


def binomial_sigma(p: float, n: int) -> float:
    return math.sqrt(p * (1 - p) / n)


def _batches(N: int):
    c = 0
    while N > 0:
        b = min(BATCH, N)
        yield c, b
        N -= b
        c += 1


# ---------------------------------------------------------------------------
# large-level regime

def gaussian_point_bound(level: float) -> float:
    """Per-cell shadow bound for standard Gaussian heights: ``q(2-q)/(1-q)``, ``q = exp(-level^2/4)``."""
    if not level > 0:
        raise ValueError("level must be > 0")
    q = math.exp(-level * level / 4.0)
    return q * (2.0 - q) / (1.0 - q)


def prop21_bound(eps: float, n: int) -> float:
    """``eps ** n``: bound on every cell of an n-cell set being shadowed (or lit)."""
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    if n < 0:
        raise ValueError("n must be >= 0")
    return eps ** n


def peierls_path_bound(eps: float, n: int) -> float:
    """Union bound over the at most 4**n self-avoiding paths of length n: ``(4 eps)**n``."""
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    if n < 0:
        raise ValueError("n must be >= 0")
    # 4**n is a power of two, so scaling eps**n by it adds no rounding
    return 4.0 ** n * eps ** n


def peierls_circuit_sum(eps: float) -> float:
    """``sum_{n>=1} n 8^n eps^n = 8 eps / (1 - 8 eps)^2``, finite for eps < 1/8."""
    if not eps > 0:
        raise ValueError("eps must be > 0")
    x = 8.0 * eps
    if x >= 1.0:
        raise ValueError(f"circuit series diverges for eps={eps} >= 1/8")
    return x / (1.0 - x) ** 2


def peierls_circuit_partial_sum(eps: float, terms: int) -> float:
    x = 8.0 * eps
    return math.fsum(n * x ** n for n in range(1, terms + 1))


# ---------------------------------------------------------------------------
# small-level regime

def ordering_probability(n: int):
    """P(Y_1 > ... > Y_n) = 1/n! for i.i.d. draws with a density (exact up to n = 20)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n <= EXACT_LIMIT:
        return Fraction(1, math.factorial(n))
    return 1.0 / math.factorial(n)


def truncated_nonpositive_prob(R0: int):
    """P(alpha_R0(u) <= 0) = 1/(R0 + 1): the cell is the highest of R0 + 1 draws."""
    if R0 < 1:
        raise ValueError("R0 must be >= 1")
    if R0 + 1 <= EXACT_LIMIT:
        return Fraction(1, R0 + 1)
    return 1.0 / (R0 + 1)


def mc_ordering_with_slack(n: int, h: float, spec: DistributionSpec | None = None,
                           N: int = 100_000, seed: int = 0) -> MCEstimate:
    """Estimate P(Y_1 >_h Y_2 >_h ... >_h Y_n) where ``x >_h y`` means ``x + h > y``."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if not h >= 0:
        raise ValueError("h must be >= 0")
    spec = spec or gaussian()
    hits = 0
    for c, b in _batches(N):
        y = sample_array(spec, substream(seed, c), (b, n))
        hits += int(np.all(y[:, :-1] + h > y[:, 1:], axis=1).sum())
    return MCEstimate(hits, N)


def mc_truncated_nonpositive(R0: int, spec: DistributionSpec | None = None,
                             N: int = 100_000, seed: int = 0) -> MCEstimate:
    """Estimate P(alpha_R0(u) <= 0) through the slope kernel."""
    spec = spec or gaussian()
    hits = 0
    for c, b in _batches(N):
        rows = sample_array(spec, substream(seed, c), (b, R0 + 1))
        a, _ = alpha_rows(rows, 1, R0)
        hits += int((a[:, 0] <= 0).sum())
    return MCEstimate(hits, N)


@dataclass(frozen=True)
class R0Decomposition:
    A: tuple
    R0: int
    blocks: tuple

    def is_valid(self) -> bool:
        flat = [a for blk in self.blocks for a in blk]
        if flat != list(self.A):
            return False
        for blk in self.blocks:
            if not blk or any(b - a > self.R0 for a, b in zip(blk, blk[1:])):
                return False
        return all(p[-1] + self.R0 < q[0] for p, q in zip(self.blocks, self.blocks[1:]))


def r0_decompose(A, R0: int) -> R0Decomposition:
    """Split a finite integer set into maximal runs with gaps <= R0 (left-to-right pass)."""
    if R0 < 1:
        raise ValueError("R0 must be >= 1")
    A = tuple(int(a) for a in A)
    if any(b <= a for a, b in zip(A, A[1:])):
        raise ValueError("A must be sorted with distinct entries")
    blocks = []
    for a in A:
        if blocks and a - blocks[-1][-1] <= R0:
            blocks[-1].append(a)
        else:
            blocks.append([a])
    return R0Decomposition(A, R0, tuple(tuple(b) for b in blocks))


# ---------------------------------------------------------------------------
# shadow-set probabilities

def _shadow_counts(spec, cells, levels, L, N, seed):
    cells = sorted({(int(i), int(j)) for i, j in cells})
    if not cells:
        return [N] * len(levels)
    i0 = min(i for i, _ in cells)
    rows = sorted({j for _, j in cells})
    width = max(i for i, _ in cells) - i0 + 1
    rix = {j: k for k, j in enumerate(rows)}
    ci = np.array([i - i0 for i, _ in cells])
    cj = np.array([rix[j] for _, j in cells])
    nr, ncols = len(rows), width + L
    hits = [0] * len(levels)
    for c, b in _batches(N):
        h = sample_array(spec, substream(seed, c), (b * nr, ncols))
        a, _ = alpha_rows(h, width, L)
        a = a.reshape(b, nr, width)[:, cj, ci]
        for m, lev in enumerate(levels):
            hits[m] += int(np.all(a >= lev, axis=1).sum())
    return hits


def mc_shadow_set_probability(spec: DistributionSpec, cells, level: float, L: int,
                              N: int = 100_000, seed: int = 0) -> MCEstimate:
    """Estimate P(every cell of ``cells`` has alpha_L >= level).

    Since alpha_L <= alpha, this is a lower estimate of the untruncated
    probability.
    """
    if not level > 0:
        raise ValueError("level must be > 0")
    return MCEstimate(_shadow_counts(spec, cells, [level], L, N, seed)[0], N)


# ---------------------------------------------------------------------------
# default verification suite

def _check(name, bound, estimate, stderr, passed, **extra):
    return {"name": name, "paper_value_or_bound": float(bound), "estimate": float(estimate),
            "stderr": float(stderr), "pass": bool(passed), **extra}


def check_truncated_identity(R0, N=200_000, seed=11):
    p = float(truncated_nonpositive_prob(R0))
    est = mc_truncated_nonpositive(R0, gaussian(), N, seed + R0)
    tol = 4 * binomial_sigma(p, N)
    return _check(f"truncated_nonpositive_R0={R0}", p, est.p_hat, est.stderr,
                  abs(est.p_hat - p) <= tol, tolerance=tol)


def check_ordering(n, N=1_000_000, seed=23):
    p = float(ordering_probability(n))
    est = mc_ordering_with_slack(n, 0.0, gaussian(), N, seed + n)
    tol = 4 * binomial_sigma(p, N)
    return _check(f"ordering_n={n}", p, est.p_hat, est.stderr, abs(est.p_hat - p) <= tol, tolerance=tol)


def check_ordering_symmetry(n=4, N=1_000_000, seed=31):
    from .oracles import ordering_symmetry_check

    rep = ordering_symmetry_check(n, gaussian(), N, seed, sigmas=5.0)
    return _check(f"ordering_symmetry_n={n}", rep.reference, rep.candidate,
                  binomial_sigma(rep.reference, N), rep.passed, tolerance=rep.tolerance)


def check_gaussian_bound(levels=(2.0, 2.5, 3.0), size=5, L=256, N=100_000, seed=47):
    cells = [(i, 0) for i in range(size)]
    hits = _shadow_counts(gaussian(), cells, list(levels), L, N, seed)
    out = []
    for lev, k in zip(levels, hits):
        est = MCEstimate(k, N)
        bound = gaussian_point_bound(lev) ** size
        out.append(_check(f"gaussian_shadow_bound_l={lev}_A={size}", bound, est.p_hat, est.stderr,
                          est.p_hat <= bound + 4 * est.stderr, L=L))
    return out


def check_circuit_closed_form(eps, terms=10_000):
    closed = peierls_circuit_sum(eps)
    partial = peierls_circuit_partial_sum(eps, terms)
    return _check(f"peierls_circuit_eps={eps}", closed, partial, 0.0, abs(closed - partial) <= 1e-12,
                  tolerance=1e-12)


def bound_suite(samples: int | None = None, seed: int = 0) -> list[dict]:
    """Every Monte Carlo and closed-form check, at the given sample size (defaults per check)."""
    def n(default):
        return default if samples is None else int(samples)

    out = [check_truncated_identity(R0, n(200_000), seed + 11) for R0 in range(1, 9)]
    out += [check_ordering(k, n(1_000_000), seed + 23) for k in range(2, 7)]
    out.append(check_ordering_symmetry(4, n(1_000_000), seed + 31))
    out += check_gaussian_bound(N=n(100_000), seed=seed + 47)
    out += [check_circuit_closed_form(e) for e in (0.001, 0.01, 0.1)]
    return out
