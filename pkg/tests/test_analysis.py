import math
from fractions import Fraction

import numpy as np
import pytest

from shadowperc import analysis as An
from shadowperc.distributions import gaussian, laplace, uniform


def test_circuit_closed_form_values():
    assert An.peierls_circuit_sum(0.005) == pytest.approx(0.04 / 0.96 ** 2, rel=1e-15)
    assert An.peierls_circuit_sum(0.01) == pytest.approx(0.08 / 0.92 ** 2, rel=1e-15)
    # frozen: 0.08 / 0.8464
    assert An.peierls_circuit_sum(0.01) == pytest.approx(0.0945179584120983, abs=1e-15)
    with pytest.raises(ValueError):
        An.peierls_circuit_sum(0.2)
    with pytest.raises(ValueError):
        An.peierls_circuit_sum(0.125)


@pytest.mark.parametrize("eps", [1e-4, 0.001, 0.01, 0.05, 0.1])
def test_circuit_partial_sums_converge(eps):
    assert abs(An.peierls_circuit_partial_sum(eps, 10_000) - An.peierls_circuit_sum(eps)) <= 1e-12


def test_path_and_prop_bounds():
    assert An.peierls_path_bound(0.1, 2) == pytest.approx(0.16)
    assert An.peierls_path_bound(0.1, 3) == pytest.approx(0.064)
    assert An.prop21_bound(0.5, 3) == 0.125
    assert An.prop21_bound(0.3, 0) == 1.0
    with pytest.raises(ValueError):
        An.prop21_bound(1.0, 2)
    with pytest.raises(ValueError):
        An.peierls_path_bound(0.1, -1)


def test_path_bound_exact_against_factored_form():
    for eps in np.linspace(0.001, 0.249, 500):
        for n in range(1, 40):
            assert An.peierls_path_bound(eps, n) <= 4.0 ** n * eps ** n


def test_shadow_set_trivial_cases():
    assert An.mc_shadow_set_probability(gaussian(), [], 1.0, 8, 100, 0).p_hat == 1.0
    assert An.mc_shadow_set_probability(gaussian(), [(2, 1)], 1e9, 8, 1000, 0).p_hat == 0.0


def test_gaussian_point_bound():
    q = math.exp(-1.0)
    assert An.gaussian_point_bound(2.0) == pytest.approx(q * (2 - q) / (1 - q), rel=1e-15)
    assert An.gaussian_point_bound(2.0) == pytest.approx(0.94985614804076877, abs=1e-15)
    assert An.gaussian_point_bound(6.0) < 1e-3
    vals = [An.gaussian_point_bound(x) for x in range(1, 7)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    with pytest.raises(ValueError):
        An.gaussian_point_bound(0.0)


def test_exact_probabilities():
    assert An.ordering_probability(3) == Fraction(1, 6)
    assert An.ordering_probability(20) == Fraction(1, math.factorial(20))
    assert isinstance(An.ordering_probability(21), float)
    assert An.truncated_nonpositive_prob(4) == Fraction(1, 5)
    assert isinstance(An.truncated_nonpositive_prob(30), float)
    with pytest.raises(ValueError):
        An.truncated_nonpositive_prob(0)
    with pytest.raises(ValueError):
        An.ordering_probability(0)


@pytest.mark.parametrize("R0", [1, 2, 3, 5])
def test_truncated_identity_small(R0):
    est = An.mc_truncated_nonpositive(R0, gaussian(), 40_000, 3)
    p = 1 / (R0 + 1)
    assert abs(est.p_hat - p) <= 4 * An.binomial_sigma(p, 40_000)


@pytest.mark.parametrize("spec", [uniform(0, 1), laplace(0, 1)])
def test_truncated_identity_other_laws(spec):
    est = An.mc_truncated_nonpositive(3, spec, 40_000, 5)
    assert abs(est.p_hat - 0.25) <= 4 * An.binomial_sigma(0.25, 40_000)


def test_ordering_slack_monotone_and_zero_slack():
    est0 = An.mc_ordering_with_slack(3, 0.0, gaussian(), 60_000, 1)
    assert abs(est0.p_hat - 1 / 6) <= 4 * An.binomial_sigma(1 / 6, 60_000)
    ps = [An.mc_ordering_with_slack(4, h, gaussian(), 20_000, 2).p_hat for h in (0, 0.1, 0.5, 1, 3)]
    # common random numbers: pathwise nondecreasing in h
    assert all(b >= a for a, b in zip(ps, ps[1:]))
    assert ps[-1] > 0.9


def test_mc_reproducible():
    a = An.mc_truncated_nonpositive(2, gaussian(), 25_000, 9)
    b = An.mc_truncated_nonpositive(2, gaussian(), 25_000, 9)
    assert a == b
    assert An.MCEstimate(0, 0).p_hat == 1.0


def test_r0_decompose_examples():
    d = An.r0_decompose([0, 1, 5, 6, 20], 3)
    assert d.blocks == ((0, 1), (5, 6), (20,))
    assert d.is_valid()
    d = An.r0_decompose([0, 1, 5, 6, 20], 4)
    assert d.blocks == ((0, 1, 5, 6), (20,))
    assert An.r0_decompose([], 2).blocks == ()
    assert An.r0_decompose([], 2).is_valid()
    with pytest.raises(ValueError):
        An.r0_decompose([3, 1], 2)


def test_r0_decompose_random_sets():
    g = np.random.default_rng(4)
    for _ in range(10_000):
        k = int(g.integers(0, 15))
        A = np.unique(g.integers(-50, 50, k))
        R0 = int(g.integers(1, 10))
        d = An.r0_decompose(A, R0)
        assert d.is_valid()


def test_invalid_decomposition_detected():
    assert not An.R0Decomposition((0, 1, 5), 3, ((0, 1, 5),)).is_valid()
    assert not An.R0Decomposition((0, 1, 3), 3, ((0, 1), (3,))).is_valid()


def test_shadow_set_probability_small():
    # a single cell with L=1 is shadowed at level l iff X(1) - X(0) >= l
    est = An.mc_shadow_set_probability(gaussian(), [(0, 0)], 1.0, 1, 50_000, 2)
    p = 0.5 * math.erfc(1.0 / 2)
    assert abs(est.p_hat - p) <= 4 * An.binomial_sigma(p, 50_000)


def test_shadow_set_below_bound():
    for lev in (2.0, 3.0):
        est = An.mc_shadow_set_probability(gaussian(), [(0, 0), (1, 0), (2, 0)], lev, 64, 20_000, 3)
        assert est.p_hat <= An.gaussian_point_bound(lev) ** 3 + 4 * est.stderr
    with pytest.raises(ValueError):
        An.mc_shadow_set_probability(gaussian(), [(0, 0)], 0.0, 4, 10, 0)


def test_shadow_set_monotone_in_set():
    small = An.mc_shadow_set_probability(gaussian(), [(0, 0)], 0.5, 16, 20_000, 8).p_hat
    big = An.mc_shadow_set_probability(gaussian(), [(0, 0), (3, 0), (0, 1)], 0.5, 16, 20_000, 8).p_hat
    assert big <= small


def test_bound_suite_reduced():
    checks = An.bound_suite(samples=20_000, seed=1)
    names = [c["name"] for c in checks]
    assert len(names) == len(set(names)) == 8 + 5 + 1 + 3 + 3
    for c in checks:
        assert {"name", "paper_value_or_bound", "estimate", "stderr", "pass"} <= set(c)
    assert all(c["pass"] for c in checks if c["name"].startswith("peierls"))
