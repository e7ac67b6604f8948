import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from shadowperc import _backend

kernels = _backend.available()
pytestmark = pytest.mark.skipif(len(kernels) < 2, reason="compiled kernels not built")

py = _backend.python_kernels
cy = _backend.compiled_kernels

rows = hnp.arrays(np.float64, st.integers(2, 80),
                  elements=st.one_of(st.integers(-5, 5).map(float), st.floats(-100, 100)))


@settings(max_examples=300, deadline=None)
@given(rows)
def test_suffix_max_slope(row):
    a1, o1 = py.suffix_max_slope(row)
    a2, o2 = cy.suffix_max_slope(row)
    assert np.array_equal(a1, a2) and np.array_equal(o1, o2)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 6), st.integers(2, 40), st.integers(1, 40), st.integers(0, 2**32 - 1))
def test_truncated_max_slope(H, width, horizon, seed):
    g = np.random.default_rng(seed)
    ncols = width + horizon
    h = g.integers(-3, 4, (H, ncols)).astype(float) if seed % 2 else g.standard_normal((H, ncols))
    a1, o1 = py.truncated_max_slope(h, width, horizon)
    a2, o2 = cy.truncated_max_slope(h, width, horizon)
    assert np.array_equal(a1, a2) and np.array_equal(o1, o2)


@settings(max_examples=300, deadline=None)
@given(hnp.arrays(np.float64, st.integers(1, 60), elements=st.integers(-4, 4).map(float)))
def test_next_smaller_or_equal(vals):
    assert np.array_equal(py.next_smaller_or_equal(vals), cy.next_smaller_or_equal(vals))


@settings(max_examples=200, deadline=None)
@given(hnp.arrays(np.uint8, st.tuples(st.integers(1, 20), st.integers(1, 20)),
                  elements=st.integers(0, 1)), st.booleans())
def test_label_components(mask, star):
    l1, c1 = py.label_components(mask, star)
    l2, c2 = cy.label_components(mask, star)
    assert c1 == c2 and np.array_equal(l1, l2)


def test_backend_selection():
    assert _backend.BACKEND in kernels
    assert _backend.kernels.NAME == _backend.BACKEND
