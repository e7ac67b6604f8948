import math

import numpy as np
import pytest

from shadowperc.distributions import gaussian, laplace
from shadowperc.field import CapacityError, generate


def test_small_field_shape_and_determinism():
    a = generate(4, 2, 2, gaussian(), 7)
    b = generate(4, 2, 2, gaussian(), 7)
    assert a.heights.shape == (2, 6)
    assert a.heights.size == 12
    assert np.all(np.isfinite(a.heights))
    assert a.heights.tobytes() == b.heights.tobytes()


def test_minimal_field():
    f = generate(1, 1, 1, gaussian(), 0)
    assert f.heights.size == 2


def test_seed_changes_grid():
    for s in range(10):
        a = generate(4, 2, 2, gaussian(), s)
        b = generate(4, 2, 2, gaussian(), s + 1000)
        assert not np.array_equal(a.heights, b.heights)


def test_thread_count_does_not_change_bytes():
    a = generate(50, 40, 30, laplace(0.2, 1.1), 99, threads=1)
    b = generate(50, 40, 30, laplace(0.2, 1.1), 99, threads=4)
    assert a.heights.tobytes() == b.heights.tobytes()


def test_rows_are_prefix_stable():
    # row j depends only on (seed, j): adding rows leaves earlier ones untouched
    a = generate(5, 3, 2, gaussian(), 11)
    b = generate(5, 8, 2, gaussian(), 11)
    assert np.array_equal(a.heights, b.heights[:3])


def test_row_slice_and_height_at():
    f = generate(6, 3, 4, gaussian(), 1)
    r = f.row_slice(0)
    assert len(r) == 10
    for j in range(3):
        row = f.row_slice(j)
        for i in range(10):
            assert row[i] == f.height_at(i, j)
    with pytest.raises(IndexError):
        f.row_slice(3)
    with pytest.raises(IndexError):
        f.height_at(10, 0)
    with pytest.raises(ValueError):
        r[0] = 1.0


def test_height_at_fixed_per_seed():
    assert generate(3, 2, 1, gaussian(), 5).height_at(0, 0) == generate(3, 2, 1, gaussian(), 5).height_at(0, 0)


def test_invalid_dimensions():
    with pytest.raises(ValueError):
        generate(0, 1, 1, gaussian(), 0)
    with pytest.raises(ValueError):
        generate(1, 1, 0, gaussian(), 0)


def test_capacity_error():
    with pytest.raises(CapacityError):
        generate(1000, 1000, 1000, gaussian(), 0, max_cells=10_000)


def test_row_independence_proxy():
    f = generate(100, 101, 1, gaussian(), 2024)
    x = f.heights[:-1, :100].ravel()
    y = f.heights[1:, :100].ravel()
    n = x.size
    assert n == 10_000
    r = np.corrcoef(x, y)[0, 1]
    assert abs(r) <= 4 / math.sqrt(n)
