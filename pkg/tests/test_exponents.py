import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hamming_hc.exponents import (
    check_E_properties,
    check_kasymp,
    check_tough,
    exponent_E,
    lower_convex_envelope,
    phi,
    pi_envelope_exponent,
    tough_f,
)
from hamming_hc.krawtchouk import build_table
from hamming_hc.special import LN2, binary_entropy, xi_crit

h = binary_entropy


def test_arc_formula_inside_strip():
    d, x = 0.2, 0.4
    assert exponent_E(d, x).e_value == pytest.approx(0.5 * (h(d) + LN2 - h(x)), rel=1e-14)


def test_edges_and_middle():
    for d in (0.05, 0.3, 0.5):
        assert exponent_E(d, 0.0).e_value == pytest.approx(h(d))
        assert exponent_E(d, 1.0).e_value == pytest.approx(h(d))
        assert exponent_E(d, 0.5).e_value == pytest.approx(0.5 * h(d), rel=1e-12)


def test_half_delta():
    # the strip is the whole interval at delta = 1/2
    for x in (0.1, 0.25, 0.4):
        assert exponent_E(0.5, x).e_value == pytest.approx(0.5 * (LN2 + LN2 - h(x)))


def test_saddle_point_is_stationary_off_arc():
    d, x = 0.1, 0.05
    ev = exponent_E(d, x)
    w = ev.omega_re
    assert ev.omega_im == 0.0
    # the saddle point solves 1 - 2xi = (1-delta) w + delta / w
    assert (1 - d) * w + d / w == pytest.approx(1 - 2 * x, rel=1e-12)
    assert phi(x, w, d) == pytest.approx(ev.e_value)


def test_seam_continuity():
    for d in (0.05, 0.2, 0.4):
        xc = xi_crit(d)
        lo, hi = exponent_E(d, xc - 1e-9).e_value, exponent_E(d, xc + 1e-9).e_value
        assert abs(lo - hi) < 1e-7


@settings(max_examples=200, deadline=None)
@given(st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_symmetries_and_range(d, x):
    e = exponent_E(d, x).e_value
    assert exponent_E(1 - d, x).e_value == pytest.approx(e, abs=1e-10)
    assert exponent_E(d, 1 - x).e_value == pytest.approx(e, abs=1e-10)
    assert -1e-12 <= e <= LN2 + 1e-12


@settings(max_examples=100, deadline=None)
@given(st.floats(0.01, 0.99), st.floats(0.01, 0.99))
def test_exchange_relation(d, x):
    lhs = exponent_E(d, x).e_value - h(d)
    rhs = exponent_E(x, d).e_value - h(x)
    assert lhs == pytest.approx(rhs, abs=1e-9)


def test_exponent_bounds_actual_krawtchouk_values():
    n = 40
    t = build_table(n)
    for j in range(0, n + 1, 5):
        for x in range(n + 1):
            if t[j, x]:
                assert math.log(abs(t[j, x])) <= n * exponent_E(j / n, x / n).e_value + 1e-9 * n


@pytest.mark.parametrize("n", [5, 17, 33])
def test_kasymp(n):
    assert check_kasymp(n).passed


def test_properties_suite_coarse():
    rep = check_E_properties(grid_step=0.02)
    assert rep.passed, rep.violations[:3]
    assert rep.sampled


def test_lower_convex_envelope():
    u = np.linspace(0, 1, 11)
    g = np.minimum(u, 1 - u)  # concave tent: envelope is the chord, i.e. zero
    hu, hg = lower_convex_envelope(u, g)
    assert np.allclose(np.interp(u, hu, hg), 0.0)
    g2 = (u - 0.5) ** 2  # already convex
    hu, hg = lower_convex_envelope(u, g2)
    assert np.allclose(np.interp(u, hu, hg), g2)


def test_pi_envelope_below_both_branches():
    for xi in (0.1, 0.25, 0.4):
        for p in (1.1, 1.3, 1.7):
            env = pi_envelope_exponent(p, xi)
            kkl = -0.5 * xi * math.log(p - 1)
            l1 = (1 / p - 0.5) * h(xi)
            assert env <= min(kkl, l1) + 1e-12


def test_pi_envelope_tangent_point():
    # for xi > 0.3093... the envelope is the straight chord (1/p - 1/2) h(xi)
    xi = 0.4
    for p in (1.2, 1.5, 1.9):
        assert float(pi_envelope_exponent(p, xi)) == pytest.approx((1 / p - 0.5) * h(xi), abs=1e-6)


def test_tough_f_endpoints():
    assert tough_f(0.0) == pytest.approx(LN2 - h(0.5))
    assert tough_f(0.0) == pytest.approx(0.0, abs=1e-15)
    assert tough_f(0.2) < 0


def test_tough_scan_is_negative_on_coarse_grid():
    rep = check_tough(grid_step=0.01)
    assert rep.extra["max_objective"] < 0
    assert rep.sampled


def test_analytic_envelope_matches_grid_hull():
    from hamming_hc.exponents import pi_envelope_table

    for xi in (0.05, 0.2, 0.35, 0.5):
        hu, hg = pi_envelope_table(xi, 8192)
        ps = np.linspace(1.0, 2.0, 101)
        assert np.allclose(pi_envelope_exponent(ps, xi), np.interp(1 / ps, hu, hg), atol=1e-7)


def test_p_star_equation():
    from hamming_hc.exponents import solve_p_star

    for xi in (0.01, 0.1, 0.3):
        ps = solve_p_star(xi)
        assert ps - math.log(ps - 1) == pytest.approx(h(xi) / xi, rel=1e-9)
    # h(xi)/xi = 2 near xi = 0.3093
    assert solve_p_star(0.32) == 2.0
    assert solve_p_star(0.30) < 2.0
