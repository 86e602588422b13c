"""Saddle-point exponent of Krawtchouk polynomials and the scans that use it.

``exponent_E(delta, xi)`` returns E with |K_{delta n}(xi n)| <= exp(n E).
Inside the critical strip xi_crit(delta) <= xi <= 1 - xi_crit(delta) the saddle
point sits on the circle |w| = sqrt(delta/(1-delta)) and E has the closed form
(h(delta) + ln 2 - h(xi))/2; outside it the saddle point is the real root of
smallest modulus of (1-delta) w^2 - (1-2xi) w + delta = 0.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .report import VerificationReport
from .special import LN2, binary_entropy, xi_crit

__all__ = [
    "ExponentEval",
    "binary_entropy",
    "phi",
    "exponent_E",
    "check_kasymp",
    "check_E_properties",
    "solve_p_star",
    "pi_envelope_exponent",
    "lower_convex_envelope",
    "tough_f",
    "tough_bound_3ab",
    "check_tough",
    "exponent_curve_rows",
]


@dataclass(frozen=True)
class ExponentEval:
    delta: float
    xi: float
    omega_re: float
    omega_im: float
    e_value: float

    @property
    def omega(self) -> complex:
        return complex(self.omega_re, self.omega_im)


def phi(xi: float, omega: complex | float, delta: float | None = None) -> float:
    """xi ln|1-w| + (1-xi) ln|1+w| - delta ln|w|.

    When ``delta`` is omitted it is recovered from 1 - 2xi = (1-delta) w + delta/w.
    """
    if omega == 0 or omega == 1 or omega == -1:
        raise ValueError(f"phi is singular at omega={omega}")
    if delta is None:
        d = omega * (1 - 2 * xi - omega) / (1 - omega * omega)
        delta = d.real if isinstance(d, complex) else float(d)
    return xi * math.log(abs(1 - omega)) + (1 - xi) * math.log(abs(1 + omega)) - delta * math.log(abs(omega))


def exponent_E(delta: float, xi: float) -> ExponentEval:
    if not (0.0 <= delta <= 1.0 and 0.0 <= xi <= 1.0):
        raise ValueError(f"(delta, xi) must lie in [0,1]^2, got ({delta}, {xi})")
    d = min(delta, 1.0 - delta)
    x = min(xi, 1.0 - xi)
    side = 1.0 if xi <= 0.5 else -1.0
    if d == 0.0:
        # K_0 = 1
        return ExponentEval(delta, xi, 0.0, 0.0, 0.0)
    hd = binary_entropy(d)
    if x == 0.0:
        return ExponentEval(delta, xi, side * d / (1.0 - d), 0.0, hd)
    xc = xi_crit(d)
    if x >= xc:
        r = math.sqrt(d / (1.0 - d))
        cos_t = (1.0 - 2.0 * xi) / (2.0 * math.sqrt(d * (1.0 - d)))
        w = cmath.rect(r, math.acos(max(-1.0, min(1.0, cos_t))))
        return ExponentEval(delta, xi, w.real, w.imag, 0.5 * (hd + LN2 - binary_entropy(x)))
    s = 1.0 - 2.0 * x
    disc = max(s * s - 1.0 + (1.0 - 2.0 * d) ** 2, 0.0)
    w = 2.0 * d / (s + math.sqrt(disc))  # small root, written to avoid cancellation
    return ExponentEval(delta, xi, side * w, 0.0, phi(x, w, d))


def check_kasymp(n: int) -> VerificationReport:
    """ln|K_j(x)| <= n E_{j/n}(x/n) + 1e-9 n for every (j, x); zeros pass vacuously."""
    from .krawtchouk import build_table

    t = build_table(n)
    tol = 1e-9 * n
    rep = VerificationReport("kasymp", n, {"tol": tol})
    for j in range(n + 1):
        for x in range(n + 1):
            v = t.k[j][x]
            if v == 0:
                rep.cells_checked += 1
                continue
            bound = n * exponent_E(j / n, x / n).e_value
            rep.observe(bound + tol - math.log(abs(v)), {"j": j, "x": x})
    return rep


def check_E_properties(grid_step: float = 0.005, tol: float = 1e-8) -> VerificationReport:
    """Grid check of the symmetry, boundary, exchange, monotonicity and small-xi
    properties of E, plus continuity across the xi_crit seam."""
    m = int(round(1.0 / grid_step))
    g = np.linspace(0.0, 1.0, m + 1)
    half = m // 2 if m % 2 == 0 else None
    rep = VerificationReport("E_properties", None, {"grid_step": grid_step, "tol": tol}, sampled=True)
    counts: dict[str, int] = {}

    def eq(name, a, b, **cell):
        counts[name] = counts.get(name, 0) + 1
        rep.observe(tol - abs(a - b), {"property": name, **cell})

    def le(name, a, b, **cell):
        counts[name] = counts.get(name, 0) + 1
        rep.observe(b + tol - a, {"property": name, **cell})

    E = np.array([[exponent_E(d, x).e_value for x in g] for d in g])
    h = np.array([binary_entropy(v) for v in g])

    for i, d in enumerate(g):
        for k, x in enumerate(g):
            le("range_low", 0.0, E[i, k], delta=d, xi=x)
            le("range_high", E[i, k], LN2, delta=d, xi=x)
            eq("sym_delta", E[i, k], exponent_E(1.0 - d, x).e_value, delta=d, xi=x)
            eq("sym_xi", E[i, k], exponent_E(d, 1.0 - x).e_value, delta=d, xi=x)
            eq("exchange", E[i, k], h[i] - h[k] + E[k, i], delta=d, xi=x)
        eq("edge_xi0", E[i, 0], h[i], delta=d)
        eq("edge_xi1", E[i, -1], h[i], delta=d)
        eq("mid_xi", exponent_E(d, 0.5).e_value, h[i] / 2, delta=d)
        eq("half_delta", exponent_E(0.5, d).e_value, LN2 - h[i] / 2, xi=d)

    lim = half if half is not None else m // 2
    for i in range(m + 1):
        for k in range(lim):
            # xi -> E decreasing on [0, 1/2]
            le("decr_in_xi", E[i, k + 1], E[i, k], delta=g[i], xi=g[k + 1])
    for k in range(m + 1):
        for i in range(lim):
            le("incr_in_delta", E[i, k], E[i + 1, k], delta=g[i + 1], xi=g[k])
            le("decr_minus_h", E[i + 1, k] - h[i + 1], E[i, k] - h[i], delta=g[i + 1], xi=g[k])
    for i in range(lim + 1):
        d = g[i]
        if d >= 0.5:
            continue
        xc = xi_crit(d)
        for k in range(m + 1):
            x = g[k]
            if x > xc:
                break
            rhs = (x * math.log(1.0 - 2.0 * d) if x > 0 else 0.0) + h[i]
            le("small_xi_bound", E[i, k], rhs, delta=d, xi=x)
        if d > 0:
            w = math.sqrt(d / (1.0 - d))
            eq("seam", phi(xc, w, d), 0.5 * (h[i] + LN2 - binary_entropy(xc)), delta=d, xi=xc)
    rep.extra["property_counts"] = counts
    return rep


# Scan of the exponent balance around the critical strip.


def lower_convex_envelope(u: np.ndarray, g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vertices of the lower convex hull of the points (u_i, g_i), u ascending."""
    hu: list[float] = []
    hg: list[float] = []
    for a, b in zip(u.tolist(), g.tolist()):
        while len(hu) >= 2 and (hu[-1] - hu[-2]) * (b - hg[-2]) - (hg[-1] - hg[-2]) * (a - hu[-2]) <= 0:
            hu.pop()
            hg.pop()
        hu.append(a)
        hg.append(b)
    return np.array(hu), np.array(hg)


def _pi_branches(u: np.ndarray, xi: float) -> tuple[np.ndarray, np.ndarray]:
    hx = binary_entropy(xi)
    with np.errstate(divide="ignore", invalid="ignore"):
        kkl = -(xi / 2.0) * np.log(1.0 / u - 1.0)
    kkl = np.where(u >= 1.0, np.inf, kkl)
    return kkl, (u - 0.5) * hx


def pi_envelope_table(xi: float, points: int = 2048) -> tuple[np.ndarray, np.ndarray]:
    """Hull of u=1/p -> min(-(xi/2) ln(p-1), (1/p - 1/2) h(xi)) on [1/2, 1]."""
    u = np.linspace(0.5, 1.0, points)
    a, b = _pi_branches(u, xi)
    return lower_convex_envelope(u, np.minimum(a, b))


def solve_p_star(xi: float, tol: float = 1e-12) -> float:
    """p* in (1, 2] with p* - ln(p*-1) = h(xi)/xi, or 2 when h(xi)/xi <= 2."""
    if not 0.0 < xi <= 0.5:
        raise ValueError(f"xi must lie in (0, 1/2], got {xi}")
    target = binary_entropy(xi) / xi
    if target <= 2.0:
        return 2.0
    lo, hi = 1.0, 2.0  # p - ln(p-1) decreases on (1, 2)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid - math.log(mid - 1.0) > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def pi_envelope_exponent(p, xi: float):
    """Convexified exponent of ||Pi_{xi n}||_{p->2}, at p in [1, 2] (scalar or array).

    In u = 1/p this is the Bonami branch -(xi/2) ln(p-1) for p >= p*, and the
    tangent chord from p* to the value h(xi)/2 at p = 1 below it.
    """
    x = min(xi, 1.0 - xi)
    pa = np.asarray(p, dtype=float)
    if x <= 0.0:
        out = np.zeros_like(pa)
    else:
        hx = binary_entropy(x)
        ps = solve_p_star(x)
        us = 1.0 / ps
        ks = -(x / 2.0) * math.log(ps - 1.0)
        with np.errstate(divide="ignore"):
            kkl = -(x / 2.0) * np.log(pa - 1.0)
        chord = ks + (1.0 / pa - us) / (1.0 - us) * (0.5 * hx - ks)
        out = np.where(pa >= ps, kkl, chord)
    return float(out) if out.ndim == 0 else out


def tough_f(xi: float) -> float:
    """min{(s/(2-s)) h(xi), -xi ln(4xi(1-xi))} + ln2 - h(xi) - h(1/2 - sqrt(xi(1-xi))), s = (1-2xi)^2."""
    s = (1.0 - 2.0 * xi) ** 2
    hx = binary_entropy(xi)
    first = s / (2.0 - s) * hx
    q = 4.0 * xi * (1.0 - xi)
    second = math.inf if q == 0.0 else -xi * math.log(q)
    inner = min(max(0.5 - math.sqrt(xi * (1.0 - xi)), 0.0), 1.0)
    return min(first, second) + LN2 - hx - binary_entropy(inner)


def tough_bound_3ab(p: float) -> float:
    """-(xi*/2) ln(p-1) + [ln2 - h(xi*) - h((1-sqrt(p-1))/2)]/2 with xi* = 1 - 1/p.

    xi* is where the xi-derivative of -(xi/2) ln(p-1) - h(xi)/2 vanishes. That
    function is convex in xi, so this is its minimum over xi, not its maximum.
    """
    xs = 1.0 - 1.0 / p
    return -(xs / 2.0) * math.log(p - 1.0) + 0.5 * (
        LN2 - binary_entropy(xs) - binary_entropy((1.0 - math.sqrt(p - 1.0)) / 2.0)
    )


def _p_of(delta):
    return 1.0 + (1.0 - 2.0 * np.asarray(delta, dtype=float)) ** 2


def check_tough(
    delta0: float = 0.05,
    Delta: float = 0.45,
    grid_step: float = 0.001,
    required_margin: float = 0.0,
) -> VerificationReport:
    """Sampled scan of (ln2 - h(xi) - h(delta))/2 + pi(p(delta), xi) over
    delta in [delta0, Delta] and xi in [xi_crit(delta), 1/2].

    A cell fails when the objective exceeds -required_margin (default: when it is
    not strictly negative). This is a grid check, not a certified bound.
    """
    if not 0.0 < delta0 < Delta < 0.5:
        raise ValueError(f"need 0 < delta0 < Delta < 1/2, got {delta0}, {Delta}")
    nd = int(math.floor((Delta - delta0) / grid_step + 1e-9))
    deltas = delta0 + grid_step * np.arange(nd + 1)
    nx = int(math.floor(0.5 / grid_step + 1e-9))
    xis = grid_step * np.arange(nx + 1)
    hd = np.array([binary_entropy(d) for d in deltas])
    pd = _p_of(deltas)
    strip = 1.0 - (1.0 - 2.0 * deltas) ** 2
    rep = VerificationReport(
        "tough",
        None,
        {"delta0": delta0, "Delta": Delta, "grid_step": grid_step, "required_margin": required_margin},
        sampled=True,
    )
    p0, p1 = float(_p_of(Delta)), float(_p_of(delta0))
    best = {"tg_3a": -math.inf, "tg_3b": -math.inf, "tg_3c": -math.inf, "tg_4_half": -math.inf}
    for xi in xis:
        in_strip = (1.0 - 2.0 * xi) ** 2 <= strip + 1e-15
        hx = binary_entropy(xi)
        if np.any(in_strip):
            pi = pi_envelope_exponent(pd[in_strip], float(xi))
            obj = 0.5 * (LN2 - hx - hd[in_strip]) + pi
            for d, v in zip(deltas[in_strip], obj):
                rep.observe(-required_margin - v, {"delta": float(d), "xi": float(xi), "objective": float(v)})
        s = (1.0 - 2.0 * xi) ** 2
        tail = 0.5 * (LN2 - hx)

        def eta(p):
            return pi_envelope_exponent(p, float(xi)) - 0.5 * binary_entropy((1.0 - math.sqrt(p - 1.0)) / 2.0)

        if s <= 2.0 - p0:
            best["tg_3a"] = max(best["tg_3a"], eta(p0) + tail)
        if s <= 2.0 - p1:
            best["tg_3b"] = max(best["tg_3b"], eta(p1) + tail)
        if 2.0 - p1 <= s <= 2.0 - p0:
            best["tg_3c"] = max(best["tg_3c"], eta(2.0 - s) + tail)
            best["tg_4_half"] = max(best["tg_4_half"], 0.5 * tough_f(float(xi)))
    rep.extra = {
        "max_objective": -(float(rep.worst_margin) + required_margin) if rep.worst_margin is not None else None,
        "max_tg_3a": float(best["tg_3a"]),
        "max_tg_3b": float(best["tg_3b"]),
        "max_tg_3c": float(best["tg_3c"]),
        "max_half_f_on_3c_range": best["tg_4_half"],
        # value at the stationary point xi* = 1 - 1/p (a minimizer in xi)
        "stationary_3a_at_p0": tough_bound_3ab(p0),
        "stationary_3b_at_p1": tough_bound_3ab(p1),
        "p0": p0,
        "p1": p1,
    }
    return rep


def exponent_curve_rows(deltas, grid_step: float = 0.005):
    """Rows (delta, xi, E, E - h(delta), in_critical_strip) for exponent plots."""
    m = int(round(1.0 / grid_step))
    for d in deltas:
        dd = min(d, 1.0 - d)
        xc = xi_crit(dd)
        hd = binary_entropy(d)
        for k in range(m + 1):
            x = k / m
            e = exponent_E(d, x).e_value
            yield d, x, e, e - hd, xc <= x <= 1.0 - xc
