import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from shadowperc import distributions as D
from shadowperc.distributions import DistributionSpec, gaussian, laplace, uniform

SPECS = [gaussian(), gaussian(1.5, 0.5), uniform(0, 1), uniform(-2, 3), laplace(), laplace(1.5, 0.7)]


def test_invalid_parameters_rejected():
    with pytest.raises(ValueError):
        gaussian(0, 0)
    with pytest.raises(ValueError):
        uniform(1, 1)
    with pytest.raises(ValueError):
        laplace(0, -1)
    with pytest.raises(ValueError):
        DistributionSpec("cauchy", 0, 1)


@pytest.mark.parametrize("spec", SPECS)
def test_capability_flags(spec):
    assert spec.has_density and spec.exponential_tail and spec.finite_first_moment


@pytest.mark.parametrize("spec", SPECS)
def test_json_roundtrip(spec):
    assert DistributionSpec.from_json(spec.to_json()) == spec


def test_json_shape():
    assert gaussian().to_dict() == {"kind": "gaussian", "mean": 0.0, "sd": 1.0}
    assert DistributionSpec.from_dict({"kind": "laplace", "loc": 1, "scale": 2}) == laplace(1, 2)
    with pytest.raises(ValueError):
        DistributionSpec.from_dict({"kind": "uniform", "lo": 0})


def test_sample_is_deterministic():
    a = D.sample(gaussian(), D.substream(12345))
    b = D.sample(gaussian(), D.substream(12345))
    assert a == b and math.isfinite(a)


def test_uniform_support():
    x = D.sample_array(uniform(0, 1), D.substream(3), 100_000)
    assert x.min() >= 0 and x.max() < 1


def test_substreams_differ_and_repeat():
    a = D.substream(7, 0).standard_normal(4)
    assert np.array_equal(a, D.substream(7, 0).standard_normal(4))
    assert not np.array_equal(a, D.substream(7, 1).standard_normal(4))
    assert D.derive_seed(7, 3) == D.derive_seed(7, 3) != D.derive_seed(7, 4)


@pytest.mark.parametrize("spec, expected", [(gaussian(), 0.0), (uniform(2, 4), 3.0), (laplace(1.5, 0.7), 1.5)])
def test_mean_closed_form(spec, expected):
    assert D.mean(spec) == expected


@pytest.mark.parametrize("spec", SPECS)
def test_empirical_mean_converges(spec):
    N = 1_000_000
    x = D.sample_array(spec, D.substream(99), N)
    assert abs(x.mean() - D.mean(spec)) <= 5 * D.std(spec) / math.sqrt(N)


def test_gaussian_sample_mean_clt():
    N = 1_000_000
    x = D.sample_array(gaussian(), D.substream(5), N)
    assert abs(x.mean()) <= 4 / math.sqrt(N)


def test_tail_mass_simple_values():
    for spec in SPECS:
        assert D.tail_mass(spec, 0) == 1.0
    assert D.tail_mass(uniform(0, 1), 1) == 0.0
    assert D.tail_mass(uniform(-2, 3), 2.5) == pytest.approx(0.5 / 5)
    with pytest.raises(ValueError):
        D.tail_mass(gaussian(), -1)


def test_tail_mass_gaussian_vs_monte_carlo():
    N = 10_000_000
    x = D.sample_array(gaussian(), D.substream(17), N)
    p_hat = float(np.mean(np.abs(x) > 2))
    p = D.tail_mass(gaussian(), 2)
    assert abs(p_hat - p) <= 4 * math.sqrt(p * (1 - p) / N)


def test_tail_mass_laplace_closed_form():
    # |X| > x for Laplace(0, b) is exp(-x/b)
    assert D.tail_mass(laplace(0, 2), 3) == pytest.approx(math.exp(-1.5))


@pytest.mark.parametrize("spec", SPECS)
@given(x1=st.floats(0, 50), x2=st.floats(0, 50))
def test_tails_monotone(spec, x1, x2):
    lo, hi = sorted((x1, x2))
    assert D.tail_mass(spec, hi) <= D.tail_mass(spec, lo)


@pytest.mark.parametrize("spec", SPECS)
@pytest.mark.parametrize("x", [0, 1, 2, 5, 10])
def test_exponential_tail_constants(spec, x):
    c, C = D.tail_constants(spec)
    assert D.tail_mass(spec, x) <= C * math.exp(-c * x)


@pytest.mark.parametrize("spec", [gaussian(), gaussian(0.5, 2.0)])
def test_difference_tail_constants_gaussian(spec):
    # X(u) - X(v) ~ N(0, 2 sd^2) for Gaussian heights
    cp, x0 = D.difference_tail_constants(spec)
    assert cp > 0 and x0 > 0
    for x in (x0, x0 + 1, 2 * x0, 5 * x0):
        p = math.erfc(x / (2 * spec.b))
        assert p <= math.exp(-cp * x)
