
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hamming_hc.addcomb import (
    check_corollary,
    corollary_bound,
    deconvolution_ratio,
    reports_to_csv,
    spectral_gap_bound,
)
from hamming_hc.cube import CubeFunction


def test_deconvolution_examples():
    for j in range(5):
        assert deconvolution_ratio(CubeFunction.constant(4), j) == pytest.approx(1.0)
    assert deconvolution_ratio(CubeFunction.delta(4), 2, "direct") == 0.0
    # {x : x_1 = 0}: half of each sphere stays inside the subspace
    v = CubeFunction(4, (np.arange(16) & 1 == 0).astype(float))
    assert deconvolution_ratio(v, 2, "direct") == pytest.approx(0.5)
    # the even-weight code contains every even sphere
    e = CubeFunction.even_indicator(4)
    assert deconvolution_ratio(e, 2, "direct") == 1.0
    assert deconvolution_ratio(e, 1, "direct") == 0.0


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 10), st.integers(0, 2**32 - 1), st.floats(0.05, 0.9))
def test_two_paths_agree(n, seed, density):
    rng = np.random.default_rng(seed)
    mask = rng.random(1 << n) < density
    mask[0] = True
    phi = CubeFunction(n, mask * rng.random(1 << n) + mask)
    for j in range(n + 1):
        a = deconvolution_ratio(phi, j, "direct")
        b = deconvolution_ratio(phi, j, "spectral")
        assert a == pytest.approx(b, rel=1e-9, abs=1e-12)


def test_deconvolution_errors():
    with pytest.raises(ValueError):
        deconvolution_ratio(CubeFunction(3, np.zeros(8)), 1)
    with pytest.raises(ValueError):
        deconvolution_ratio(CubeFunction(3, -np.ones(8)), 1)


def test_corollary_bound():
    assert corollary_bound(2.0, 0.25, 2.0) == 1.0
    assert corollary_bound(0.5, 0.5, 2.0) == pytest.approx(16.0)  # p = 1, exponent 2
    p = 1 + (1 - 2 * 0.2) ** 2
    assert corollary_bound(0.3, 0.2) == pytest.approx((2 / 0.3) ** (2 * p / (2 - p)))
    for bad in (0.0, 1.0):
        with pytest.raises(ValueError):
            corollary_bound(0.5, bad)


def test_spectral_gap_bound():
    assert spectral_gap_bound(1.0, 0.25) == pytest.approx(1.0)
    assert spectral_gap_bound(0.5, 0.25) is None
    assert spectral_gap_bound(0.4, 0.5 - 1e-12) == pytest.approx(1 / 0.4, rel=1e-9)


def test_check_corollary_examples():
    reps = check_corollary(8, "full")
    assert all(r.ratio == 1 and r.lambda_achieved == pytest.approx(1.0) and r.passed for r in reps)
    reps = check_corollary(8, "singleton")
    assert all(r.lambda_achieved == 0 and r.ratio == 256 and r.passed for r in reps)
    reps = check_corollary(12, "random", seed=5)
    assert all(r.passed for r in reps)
    assert {r.j for r in reps} == set(range(3, 10))


def test_csv_summary():
    text = reports_to_csv(check_corollary(4, "sphere"))
    lines = text.strip().split("\n")
    assert lines[0] == "family,label,n,j,lambda,ratio,hc_bound,sg_bound_or_nan"
    assert all(len(line.split(",")) == 8 for line in lines)
    assert any(line.endswith(",nan") for line in lines[1:])


def test_harness_lambda_matches_deconvolution_ratio():
    reps = check_corollary(7, "ball")
    for r in reps:
        radius = int(r.label.removeprefix("radius"))
        w = np.array([bin(x).count("1") for x in range(128)])
        phi = CubeFunction(7, (w <= radius).astype(float))
        assert r.lambda_achieved == pytest.approx(deconvolution_ratio(phi, r.j, "direct"), rel=1e-12, abs=1e-15)
