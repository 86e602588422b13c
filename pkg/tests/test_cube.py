import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hamming_hc.cube import (
    CubeFunction,
    convolve,
    convolve_direct,
    even_odd_split,
    inner_product,
    lp_norm,
    popcounts,
    wht,
    wht_array,
)
from oracles import hadamard, weight


@pytest.mark.parametrize("n", [1, 2, 3, 5, 7])
def test_wht_matches_dense_matrix(n):
    rng = np.random.default_rng(n)
    f = rng.normal(size=1 << n)
    assert np.allclose(wht_array(f, n), hadamard(n) @ f, atol=1e-12)


def test_wht_twice_scales_by_size():
    f = CubeFunction(6, np.random.default_rng(1).normal(size=64))
    assert np.allclose(wht(wht(f)).values, 64 * f.values)


def test_wht_on_python_ints_is_exact():
    a = np.array([3, 1, 4, 1, 5, 9, 2, 6], dtype=object)
    assert list(wht_array(a, 3)) == list((hadamard(3).astype(int) @ np.array([3, 1, 4, 1, 5, 9, 2, 6])).tolist())


def test_popcounts():
    assert list(popcounts(4)) == [weight(x) for x in range(16)]


def test_character_transform_is_point_mass():
    n, v = 4, 0b0110
    hat = wht(CubeFunction.character(n, v)).values
    expected = np.zeros(16)
    expected[v] = 16
    assert np.allclose(hat, expected)


def test_lp_norms_of_delta():
    n = 5
    d = CubeFunction.delta(n)
    for p in (1, 1.5, 2, 4):
        assert lp_norm(d, p) == pytest.approx(2.0 ** (-n / p), rel=1e-14)
    assert lp_norm(d, math.inf) == 1.0
    with pytest.raises(ValueError):
        lp_norm(d, 0.5)


def test_epsilon_product_closed_form():
    n, eps = 5, 0.3
    f = CubeFunction.epsilon_product(n, eps)
    direct = np.ones(32)
    for j in range(n):
        direct *= CubeFunction.character(n, 1 << j).values * eps + 1
    assert np.allclose(f.values, direct)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_fast_convolution_matches_direct(n, seed):
    rng = np.random.default_rng(seed)
    f = CubeFunction(n, rng.normal(size=1 << n))
    g = CubeFunction(n, rng.normal(size=1 << n))
    assert np.allclose(convolve(f, g).values, convolve_direct(f, g).values, atol=1e-10)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 7), st.integers(0, 2**32 - 1))
def test_parseval(n, seed):
    f = CubeFunction(n, np.random.default_rng(seed).normal(size=1 << n))
    hat = wht(f).values
    assert inner_product(f, f) == pytest.approx(np.dot(hat, hat) / 4**n, rel=1e-12)


def test_young_equality_for_point_mass():
    # ||phi * f||_2 with f a point mass equals ||phi||_2 (unnormalized sum convolution)
    rng = np.random.default_rng(3)
    phi = CubeFunction(6, rng.random(64))
    out = convolve(phi, CubeFunction.delta(6))
    assert lp_norm(out, 2) == pytest.approx(lp_norm(phi, 2), rel=1e-12)


def test_even_odd_split():
    f = CubeFunction(4, np.arange(16.0))
    e, o = even_odd_split(f)
    assert np.array_equal((e + o).values, f.values)
    assert not np.any(e.values * o.values)


def test_validation():
    with pytest.raises(ValueError):
        CubeFunction(3, np.zeros(7))
    with pytest.raises(ValueError):
        CubeFunction(2, np.zeros(4)) + CubeFunction(3, np.zeros(8))
    f = CubeFunction(2, np.zeros(4))
    with pytest.raises(ValueError):
        f.values[0] = 1.0
