"""Exact Krawtchouk tables and the eigenvalue-ratio inequalities built on them.

K_j(x) is the Fourier transform of the indicator of the Hamming sphere of
radius j, evaluated at any point of weight x:

    K_j(x) = sum_k (-1)^k C(x, k) C(n - x, j - k).

Every pass/fail decision below is made with Python integers or Fractions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .report import VerificationReport
from .special import LN2, binary_entropy, exact, xi_crit

MAX_TABLE_N = 64
WHT_CROSSCHECK_MAX_N = 14

__all__ = [
    "KrawtchoukTable",
    "build_table",
    "table_from_recurrence",
    "check_identities",
    "wht_crosscheck",
    "xi_crit",
    "check_rdd",
    "check_rqq",
    "check_rzz",
    "krawtchouk_lp_exact",
    "krawtchouk_lp_exponent",
]


@dataclass(frozen=True)
class KrawtchoukTable:
    n: int
    k: tuple[tuple[int, ...], ...]  # k[j][x] = K_j(x)

    def __getitem__(self, jx: tuple[int, int]) -> int:
        j, x = jx
        return self.k[j][x]

    def row(self, j: int) -> tuple[int, ...]:
        return self.k[j]

    def ratio(self, j: int, x: int) -> Fraction:
        """K_j(x) / K_j(0) as an exact rational."""
        return Fraction(self.k[j][x], self.k[j][0])

    def as_array(self) -> np.ndarray:
        return np.array(self.k, dtype=object)


def _sum_formula(n: int) -> tuple[tuple[int, ...], ...]:
    rows = []
    for j in range(n + 1):
        row = []
        for x in range(n + 1):
            lo, hi = max(0, j - (n - x)), min(x, j)
            row.append(sum((-1) ** k * math.comb(x, k) * math.comb(n - x, j - k) for k in range(lo, hi + 1)))
        rows.append(tuple(row))
    return tuple(rows)


def table_from_recurrence(n: int) -> KrawtchoukTable:
    """Build the table from K_j(0), K_j(1) and the three-term recurrence in x."""
    rows = []
    for j in range(n + 1):
        row = [math.comb(n, j)]
        if n >= 1:
            # K_j(1) = C(n-1, j) - C(n-1, j-1)
            row.append(math.comb(n - 1, j) - (math.comb(n - 1, j - 1) if j >= 1 else 0))
        for x in range(1, n):
            num = (n - 2 * j) * row[x] - x * row[x - 1]
            q, r = divmod(num, n - x)
            if r:
                raise ArithmeticError(f"non-integral recurrence step at n={n}, j={j}, x={x}")
            row.append(q)
        rows.append(tuple(row))
    return KrawtchoukTable(n, tuple(rows))


def check_identities(table: KrawtchoukTable) -> VerificationReport:
    """The five exact table identities; margin 0 on success, -1 per failed cell."""
    n, k = table.n, table.k
    rep = VerificationReport("krawtchouk_identities", n, {})
    for j in range(n + 1):
        cj = math.comb(n, j)
        for x in range(n + 1):
            checks = {
                "k0_binomial": k[j][0] == cj,
                "sym_x": k[j][x] == (-1) ** j * k[j][n - x],
                "sym_j": k[j][x] == (-1) ** x * k[n - j][x],
                "exchange": k[j][x] * math.comb(n, x) == k[x][j] * cj,
            }
            if 1 <= x <= n - 1:
                checks["recurrence"] = (n - x) * k[j][x + 1] - (n - 2 * j) * k[j][x] + x * k[j][x - 1] == 0
            for name, ok in checks.items():
                rep.observe(0 if ok else -1, {"identity": name, "j": j, "x": x})
    return rep


def wht_crosscheck(table: KrawtchoukTable) -> VerificationReport:
    """Compare k[j][|w|] with the transform of the sphere indicator at every w."""
    from .cube import popcounts, wht_array

    n = table.n
    w = popcounts(n)
    spheres = (w[None, :] == np.arange(n + 1)[:, None]).astype(float)
    hat = np.rint(wht_array(spheres, n)).astype(np.int64)
    expected = np.array([[table.k[j][wt] for wt in w] for j in range(n + 1)], dtype=np.int64)
    rep = VerificationReport("krawtchouk_wht", n, {})
    bad = np.argwhere(hat != expected)
    rep.cells_checked = int(hat.size)
    rep.worst_margin = 0 if bad.size == 0 else -1
    for j, om in bad[: rep.max_violations_kept]:
        rep.violations.append({"j": int(j), "omega": int(om)})
    return rep


@lru_cache(maxsize=None)
def build_table(n: int, max_n: int = MAX_TABLE_N) -> KrawtchoukTable:
    """Exact table for dimension n, with all identities verified at build time."""
    if not isinstance(n, int) or not 1 <= n <= max_n:
        raise ValueError(f"n must be an integer in [1, {max_n}], got {n!r}")
    table = KrawtchoukTable(n, _sum_formula(n))
    rep = check_identities(table)
    if not rep.passed:
        raise ArithmeticError(f"Krawtchouk identities fail for n={n}: {rep.violations[:3]}")
    if n <= WHT_CROSSCHECK_MAX_N and not wht_crosscheck(table).passed:
        raise ArithmeticError(f"Krawtchouk table disagrees with sphere transforms for n={n}")
    return table


# Eigenvalue-ratio inequalities.


def check_rdd(n: int) -> VerificationReport:
    """K_j(x)/K_j(0) <= (1 - 2j/n)^x for j <= n/2, 0 <= x <= n/2 - sqrt(j(n-j))."""
    t = build_table(n)
    rep = VerificationReport("rdd", n, {})
    for j in range(n // 2 + 1):
        base = Fraction(n - 2 * j, n)
        x = 0
        # x <= n/2 - sqrt(j(n-j))  <=>  n - 2x >= 0 and (n - 2x)^2 >= 4 j (n - j)
        while n - 2 * x >= 0 and (n - 2 * x) ** 2 >= 4 * j * (n - j):
            rep.observe(base**x - t.ratio(j, x), {"j": j, "x": x})
            x += 1
    return rep


def check_rqq(n: int, theta1="0.45") -> VerificationReport:
    """|K_j(x)/K_j(0)| <= theta1^x on the region n-2j <= n*theta1 and
    x <= 1 + theta1/(1+theta1^2) * (n*theta1 - (n-2j)), with j <= n/2."""
    th = exact(theta1)
    if not 0 < th < Fraction(1, 2):
        raise ValueError(f"theta1 must lie in (0, 1/2), got {theta1}")
    t = build_table(n)
    rep = VerificationReport("rqq", n, {"theta1": th})
    slope = th / (1 + th * th)
    for j in range(n // 2 + 1):
        gap = n - 2 * j
        if gap > n * th:
            continue
        x_max = min(n, math.floor(1 + slope * (n * th - gap)))
        for x in range(x_max + 1):
            rep.observe(th**x - abs(t.ratio(j, x)), {"j": j, "x": x})
    return rep


def check_rzz(n: int, c1=1, delta0="0.174") -> VerificationReport:
    """|K_j(x)/K_j(0)| <= c1 (1 - 2j/n)^x for j <= delta0*n, x <= n/2."""
    c1, d0 = exact(c1), exact(delta0)
    t = build_table(n)
    rep = VerificationReport("rzz", n, {"c1": c1, "delta0": d0})
    for j in range(math.floor(d0 * n) + 1):
        base = Fraction(n - 2 * j, n)
        for x in range(n // 2 + 1):
            rep.observe(c1 * base**x - abs(t.ratio(j, x)), {"j": j, "x": x})
    return rep


# Norms of K_j under the uniform measure on F_2^n.


def krawtchouk_lp_exact(n: int, j: int, p: float, table: KrawtchoukTable | None = None) -> float:
    """||K_j||_p with ||g||_p^p = sum_a 2^-n C(n,a) |K_j(a)|^p.

    Integer p is summed exactly; other p in the log domain, smallest terms first.
    """
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    t = table if table is not None else build_table(n)
    row = t.k[j]
    if math.isinf(p):
        return float(max(abs(v) for v in row))
    if float(p).is_integer():
        ip = int(p)
        total = Fraction(sum(math.comb(n, a) * abs(row[a]) ** ip for a in range(n + 1)), 1 << n)
        if ip == 2:
            return math.sqrt(total)
        return math.exp((math.log(total.numerator) - math.log(total.denominator)) / ip)
    logs = sorted(math.log(math.comb(n, a)) + p * math.log(abs(row[a])) for a in range(n + 1) if row[a] != 0)
    top = logs[-1]
    s = math.fsum(math.exp(v - top) for v in logs)
    return math.exp((top + math.log(s) - n * LN2) / p)


def _delta_of_omega(omega: float, p: float) -> tuple[float, float]:
    c = math.tanh(p * math.atanh(omega))
    return (c * omega - omega * omega) / (1.0 - omega * omega), c


def krawtchouk_lp_exponent(delta: float, p: float) -> float:
    """lim (1/n) ln ||K_{floor(delta n)}||_p for 0 < delta < 1/2.

    For p > 2 the saddle point omega in (0, 1) solves
    delta = (c w - w^2)/(1 - w^2) with c = tanh(p artanh w), and the exponent is
    (h(xi) - ln 2)/p + phi(xi, w) at xi = (1 - c)/2.
    """
    from .exponents import phi

    if not 0.0 < delta < 0.5:
        raise ValueError(f"delta must lie in (0, 1/2), got {delta}")
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    if p <= 2:
        return binary_entropy(delta) / 2
    if math.isinf(p):
        return binary_entropy(delta)
    lo, hi = 1e-300, 0.5
    while _delta_of_omega(hi, p)[0] < delta:
        hi = (1.0 + hi) / 2
        if hi > 1.0 - 1e-15:
            raise ValueError(f"no saddle point bracket for delta={delta}, p={p}")
    omega = brentq(lambda w: _delta_of_omega(w, p)[0] - delta, lo, hi, xtol=1e-12, rtol=4 * np.finfo(float).eps)
    c = _delta_of_omega(omega, p)[1]
    xi = (1.0 - c) / 2
    return (binary_entropy(xi) - LN2) / p + phi(xi, omega, delta)
