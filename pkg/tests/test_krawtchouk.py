import math
from fractions import Fraction

import numpy as np
import pytest

from hamming_hc.cube import CubeFunction, lp_norm
from hamming_hc.krawtchouk import (
    build_table,
    check_identities,
    check_rdd,
    check_rqq,
    check_rzz,
    krawtchouk_lp_exact,
    krawtchouk_lp_exponent,
    table_from_recurrence,
    wht_crosscheck,
)
from hamming_hc.special import binary_entropy, exact, xi_crit
from oracles import krawtchouk_by_counting


@pytest.mark.parametrize("n", [1, 2, 5, 8])
def test_table_matches_character_sums(n):
    t = build_table(n)
    for j in range(n + 1):
        for x in range(n + 1):
            assert t[j, x] == krawtchouk_by_counting(n, j, x)


def test_small_tables():
    assert build_table(2).k == ((1, 1, 1), (2, 0, -2), (1, -1, 1))
    # K_1(x) = n - 2x
    t = build_table(9)
    assert t.row(1) == tuple(9 - 2 * x for x in range(10))


@pytest.mark.parametrize("n", [3, 10, 25, 64])
def test_recurrence_agrees_with_sum(n):
    assert table_from_recurrence(n).k == build_table(n).k


def test_identities_and_transform_crosscheck():
    for n in (1, 7, 14):
        assert check_identities(build_table(n)).passed
        assert wht_crosscheck(build_table(n)).passed


def test_identity_check_detects_corruption():
    t = build_table(6)
    rows = [list(r) for r in t.k]
    rows[2][3] += 1
    bad = type(t)(6, tuple(tuple(r) for r in rows))
    assert not check_identities(bad).passed


def test_ratio_is_exact():
    assert build_table(12).ratio(2, 6) == Fraction(-6, 66)


def test_build_table_rejects_bad_n():
    for n in (0, 65, 2.0):
        with pytest.raises(ValueError):
            build_table(n)


def test_exact_decimal_inputs():
    assert exact("0.174") == Fraction(174, 1000)
    assert exact(0.1) == Fraction(1, 10)


def test_xi_crit():
    assert xi_crit(0.5) == 0.0
    assert xi_crit(0.1) == pytest.approx(0.2)


@pytest.mark.parametrize("n", [8, 20, 40])
def test_rdd_passes(n):
    rep = check_rdd(n)
    assert rep.passed and rep.cells_checked > 0


def test_rdd_region_includes_x0_and_margin_is_exact():
    rep = check_rdd(10)
    assert isinstance(rep.worst_margin, Fraction)
    assert rep.worst_margin == 0  # x = 0 gives equality


@pytest.mark.parametrize("theta", ["0.05", "0.25", "0.45"])
def test_rqq_passes(theta):
    for n in (10, 31, 48):
        assert check_rqq(n, theta).passed


def test_rqq_is_false_beyond_half():
    # for j = n the ratio is (-1)^x, so restricting to j <= n/2 is necessary
    t = build_table(10)
    assert abs(t.ratio(10, 1)) == 1


def test_rzz_small_dimension_counterexample():
    rep = check_rzz(12)
    assert not rep.passed
    assert {"j": 2, "x": 6} in rep.violations
    assert abs(build_table(12).ratio(2, 6)) > Fraction(2, 3) ** 6
    # a slightly larger constant repairs n = 12
    assert check_rzz(12, c1="1.04").passed


def test_rzz_passes_for_larger_dimension():
    for n in (20, 40, 64):
        assert check_rzz(n).passed


@pytest.mark.parametrize("n,j", [(6, 2), (9, 4), (10, 3)])
@pytest.mark.parametrize("p", [1, 1.5, 2, 3, 4.5, math.inf])
def test_lp_norm_matches_cube_function(n, j, p):
    k_on_cube = CubeFunction(n, np.array([build_table(n)[j, bin(x).count("1")] for x in range(1 << n)], float))
    assert krawtchouk_lp_exact(n, j, p) == pytest.approx(lp_norm(k_on_cube, p), rel=1e-12)


def test_l2_norm_is_sqrt_binomial():
    assert krawtchouk_lp_exact(30, 7, 2) == pytest.approx(math.sqrt(math.comb(30, 7)), rel=1e-15)


def test_lp_exponent_small_p_and_limit():
    assert krawtchouk_lp_exponent(0.2, 1.5) == binary_entropy(0.2) / 2
    assert krawtchouk_lp_exponent(0.2, 2.0) == binary_entropy(0.2) / 2
    # continuous at p = 2 and approaching h(delta) for large p
    assert krawtchouk_lp_exponent(0.2, 2.0001) == pytest.approx(binary_entropy(0.2) / 2, abs=1e-4)
    assert krawtchouk_lp_exponent(0.2, 400) == pytest.approx(binary_entropy(0.2), abs=1e-2)


def test_lp_exponent_against_finite_n():
    # (1/n) ln ||K_{delta n}||_4 approaches the exponent; the o(1) term is below 0.05 at n = 64
    n, p = 64, 4
    finite = math.log(krawtchouk_lp_exact(n, 16, p)) / n
    assert abs(krawtchouk_lp_exponent(0.25, p) - finite) < 0.05


def test_lp_exponent_increasing_in_p():
    vals = [krawtchouk_lp_exponent(0.3, p) for p in (2.5, 3, 4, 6, 10)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
