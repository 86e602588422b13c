"""S_n-equivariant convolution operators given by one eigenvalue per Fourier level.

Every operator here acts as f_hat(w) -> lambda_{|w|} f_hat(w). The spherical
average over radius j has lambda_a = K_j(a)/K_j(0), Bernoulli noise has
lambda_a = (1-2 delta)^a and the level projection Pi_a is an indicator.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .cube import CubeFunction, lp_norm, max_cube_dim, popcounts, wht_array
from .exponents import exponent_E, pi_envelope_exponent, solve_p_star
from .krawtchouk import build_table, krawtchouk_lp_exact, krawtchouk_lp_exponent
from .report import VerificationReport
from .special import binary_entropy, exact, xi_crit

KINDS = ("spherical", "noise", "projection", "custom")


@dataclass(frozen=True, eq=False)
class MultiplierProfile:
    n: int
    lambdas: np.ndarray
    kind: str
    param: object = None
    radius: int | None = None  # sphere radius j for the spherical kind

    def __post_init__(self):
        lam = np.asarray(self.lambdas, dtype=float).copy()
        if lam.shape != (self.n + 1,):
            raise ValueError(f"need n+1={self.n + 1} eigenvalues, got shape {lam.shape}")
        if self.kind not in KINDS:
            raise ValueError(f"unknown profile kind {self.kind!r}")
        lam.flags.writeable = False
        object.__setattr__(self, "lambdas", lam)


def sphere_radius(n: int, delta) -> int:
    """ceil(delta n) below 1/2, floor(delta n) from 1/2 on, computed exactly."""
    d = exact(delta)
    return math.ceil(d * n) if d < Fraction(1, 2) else math.floor(d * n)


def make_profile(n: int, kind: str, param=None) -> MultiplierProfile:
    """Build a profile; ``param`` is delta (spherical, noise), the level a
    (projection) or the eigenvalue sequence (custom)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if kind == "spherical":
        d = exact(param)
        if not 0 <= d <= 1:
            raise ValueError(f"delta must lie in [0, 1], got {param}")
        j = sphere_radius(n, d)
        t = build_table(n)
        lam = [float(t.ratio(j, a)) for a in range(n + 1)]
        return MultiplierProfile(n, np.array(lam), kind, param, radius=j)
    if kind == "noise":
        d = float(param)
        if not 0.0 <= d <= 1.0:
            raise ValueError(f"delta must lie in [0, 1], got {param}")
        return MultiplierProfile(n, (1.0 - 2.0 * d) ** np.arange(n + 1), kind, d)
    if kind == "projection":
        a = int(param)
        if not 0 <= a <= n:
            raise ValueError(f"level must lie in [0, {n}], got {param}")
        lam = np.zeros(n + 1)
        lam[a] = 1.0
        return MultiplierProfile(n, lam, kind, a)
    if kind == "custom":
        return MultiplierProfile(n, np.asarray(param, dtype=float), kind, None)
    raise ValueError(f"unknown profile kind {kind!r}")


def sphere_profile(n: int, j: int) -> MultiplierProfile:
    """Spherical average over exactly radius j."""
    return make_profile(n, "spherical", Fraction(j, n))


def _apply_values(profile: MultiplierProfile, vals: np.ndarray) -> np.ndarray:
    n = profile.n
    mult = profile.lambdas[popcounts(n)]
    return wht_array(wht_array(vals, n) * mult, n) / (1 << n)


def apply(profile: MultiplierProfile, f: CubeFunction) -> CubeFunction:
    if f.n != profile.n:
        raise ValueError(f"dimension mismatch: profile n={profile.n}, function n={f.n}")
    return CubeFunction(f.n, _apply_values(profile, f.values))


def sphere_average(f: CubeFunction, j: int) -> CubeFunction:
    """Direct sum_{|y|=j} f(x+y) / C(n,j); reference path for small n."""
    n = f.n
    idx = np.arange(1 << n)
    out = np.zeros(1 << n)
    count = 0
    for bits in combinations(range(n), j):
        y = sum(1 << b for b in bits)
        out += f.values[idx ^ y]
        count += 1
    return CubeFunction(n, out / count)


def level_energies(f: CubeFunction) -> np.ndarray:
    """||Pi_a f||_2^2 for a = 0..n."""
    hat = wht_array(f.values, f.n)
    return np.bincount(popcounts(f.n), weights=hat * hat, minlength=f.n + 1) / float(1 << (2 * f.n))


def norm_1_to_2_exact(profile: MultiplierProfile) -> float:
    """||T||_{1->2} = (sum_a C(n,a) lambda_a^2)^(1/2), attained at a point mass."""
    n = profile.n
    return math.sqrt(math.fsum(math.comb(n, a) * float(l) ** 2 for a, l in enumerate(profile.lambdas)))


# p -> 2 norm search


@dataclass
class SearchConfig:
    restarts: int = 16
    seed: int = 0
    tol: float = 1e-10
    max_iter: int = 10000
    eps_seeds: tuple[float, ...] = (0.1, 0.3, 0.5)
    nonnegative: bool | None = None  # None: decided by the profile kind


@dataclass
class NormEstimate:
    lower: float
    upper: float | None
    witness: CubeFunction
    method: str
    iterations: int
    witness_kind: str = ""
    extra: dict = field(default_factory=dict)


def _ratio_rows(profile: MultiplierProfile, F: np.ndarray, p: float) -> np.ndarray:
    G = _apply_values(profile, F)
    num = np.sqrt(np.mean(G * G, axis=-1))
    den = np.array([lp_norm(CubeFunction(profile.n, row), p) for row in F])
    return num / den


def _normalize_p(F: np.ndarray, p: float) -> np.ndarray:
    m = np.max(np.abs(F), axis=-1, keepdims=True)
    m[m == 0] = 1.0
    F = F / m
    if math.isinf(p):
        return F
    norms = np.mean(np.abs(F) ** p, axis=-1, keepdims=True) ** (1.0 / p)
    norms[norms == 0] = 1.0
    return F / norms


def norm_lower_search(profile: MultiplierProfile, p: float, config: SearchConfig | None = None) -> NormEstimate:
    """Lower-bound ||T||_{p->2} by the nonlinear power iteration
    f <- dual_p'(T T f), started from random and structured functions.

    For p = 1 the dual step moves all mass to argmax |T T f|, so the iteration
    settles on point masses.
    """
    if not 1.0 <= p <= 2.0:
        raise ValueError(f"p must lie in [1, 2], got {p}")
    cfg = config or SearchConfig()
    n = profile.n
    if n > max_cube_dim():
        raise ValueError(f"n={n} exceeds the configured maximum {max_cube_dim()} (HH_MAX_N)")
    nonneg = cfg.nonnegative if cfg.nonnegative is not None else profile.kind in ("spherical", "noise")
    rng = np.random.default_rng(cfg.seed)
    size = 1 << n
    labels = ["delta0", "even", *[f"eps_product({e:g})" for e in cfg.eps_seeds]]
    starts = [
        CubeFunction.delta(n).values,
        CubeFunction.even_indicator(n).values,
        *[CubeFunction.epsilon_product(n, e).values for e in cfg.eps_seeds],
    ]
    for r in range(cfg.restarts):
        starts.append(rng.uniform(0.0, 1.0, size) if nonneg else rng.uniform(-1.0, 1.0, size))
        labels.append(f"random[{r}]")
    F = _normalize_p(np.array(starts), p)
    q = math.inf if p == 1.0 else p / (p - 1.0)
    best = np.full(len(F), -np.inf)
    best_F = F.copy()
    prev = np.full(len(F), -np.inf)
    lam2 = (profile.lambdas**2)[popcounts(n)]
    norm4 = float(1 << (2 * n))
    idx = np.arange(len(F))  # rows still iterating
    it = 0
    for it in range(1, cfg.max_iter + 1):
        Fa = F[idx]
        hat = wht_array(Fa, n)
        weighted = hat * lam2
        # ||Tf||_2^2 = sum_w lambda^2 f_hat^2 / 4^n by Parseval
        ratio = np.sqrt(np.maximum(np.sum(weighted * hat, axis=-1), 0.0) / norm4)
        better = ratio > best[idx]
        best[idx[better]] = ratio[better]
        best_F[idx[better]] = Fa[better]
        conv = np.abs(ratio - prev[idx]) <= cfg.tol * np.maximum(ratio, 1e-300)
        prev[idx] = ratio
        keep = ~conv
        if not keep.any():
            break
        idx, weighted = idx[keep], weighted[keep]
        H = wht_array(weighted, n)  # 2^n T*T f
        if math.isinf(q):
            Fn = np.zeros_like(H)
            rows = np.arange(len(H))
            k = np.argmax(np.abs(H), axis=-1)
            Fn[rows, k] = np.where(H[rows, k] < 0, -1.0, 1.0)
        else:
            Hs = H / np.maximum(np.max(np.abs(H), axis=-1, keepdims=True), 1e-300)
            Fn = np.sign(Hs) * np.abs(Hs) ** (q - 1.0)
        F[idx] = _normalize_p(Fn, p)
    i = int(np.argmax(best))
    witness = CubeFunction(n, best_F[i])
    lower = float(_ratio_rows(profile, best_F[i : i + 1], p)[0])
    return NormEstimate(lower, None, witness, "power_iteration", it, labels[i], {"start_ratios": best.tolist()})


def ratio_for(profile: MultiplierProfile, f: CubeFunction, p: float) -> float:
    """||T f||_2 / ||f||_p."""
    return lp_norm(apply(profile, f), 2) / lp_norm(f, p)


# Level projections


def _log_comb(n: int, a: int) -> float:
    return math.log(math.comb(n, a))


def pi_norm_bounds(n: int, a: int, p: float) -> dict[str, float]:
    """Upper bounds on ||Pi_a||_{p->2}: Bonami (kkl), interpolation with 1->2 (l1),
    and the interpolation through p* (best)."""
    if p <= 1.0 or p > 2.0:
        raise ValueError(f"p must lie in (1, 2], got {p}")
    if not 0 <= a <= n:
        raise ValueError(f"level must lie in [0, {n}], got {a}")
    a = min(a, n - a)
    if a == 0:
        return {"kkl": 1.0, "l1": 1.0, "best": 1.0}
    lc = _log_comb(n, a)
    log_kkl = -(a / 2.0) * math.log(p - 1.0)
    log_l1 = (1.0 / p - 0.5) * lc
    ps = solve_p_star(a / n)
    if p >= ps:
        log_best = log_kkl
    else:
        s = (1.0 / p - 1.0 / ps) / (1.0 - 1.0 / ps)
        # chord between the Bonami bound at p* and sqrt(C(n,a)) at p = 1
        log_best = -(1.0 - s) * (a / 2.0) * math.log(ps - 1.0) + 0.5 * s * lc
    return {"kkl": math.exp(log_kkl), "l1": math.exp(log_l1), "best": math.exp(log_best)}


def pi_norm_upper(n: int, a: int, p: float) -> float:
    return min(pi_norm_bounds(n, a, p).values())


def pi_norm_lower(n: int, a: int, p: float, q: float = 2.0) -> float:
    """||K_a||_q ||K_a||_{p'} / ||K_a||_2^2, from permutation-invariant test functions."""
    if p < 1 or q < 1:
        raise ValueError("p and q must be >= 1")
    t = build_table(n)
    pc = math.inf if p == 1 else (1.0 if math.isinf(p) else p / (p - 1.0))
    return krawtchouk_lp_exact(n, a, q, t) * krawtchouk_lp_exact(n, a, pc, t) / math.comb(n, a)


# Certificates and witness families


def norm_upper_certificate(profile: MultiplierProfile, p: float) -> float:
    return min(certificate_variants(profile, p).values())


def certificate_variants(profile: MultiplierProfile, p: float) -> dict[str, float]:
    """Finite-n upper bounds on ||T||_{p->2} from per-level projection bounds.

    triangle:  sum_a |lambda_a| U_a
    levels:    (sum_a lambda_a^2 U_a^2)^(1/2), by orthogonality of the levels
    even_odd:  (2 sum_{a<=n/2} max(lambda_a, lambda_{n-a})^2 U_a^2)^(1/2), spherical only
    """
    if p <= 1.0:
        raise ValueError(f"p must be > 1, got {p}")
    n = profile.n
    lam = np.abs(profile.lambdas)
    U = np.array([pi_norm_upper(n, a, p) for a in range(n + 1)])
    out = {
        "triangle": float(math.fsum(lam * U)),
        "levels": math.sqrt(math.fsum((lam * U) ** 2)),
    }
    if profile.kind == "spherical":
        half = [max(lam[a], lam[n - a]) * U[a] for a in range(n // 2 + 1)]
        out["even_odd"] = math.sqrt(2.0 * math.fsum(v * v for v in half))
    return out


def counterexample_growth(delta, p: float, eps: float, n_list) -> list[tuple[int, float]]:
    """||T_delta f||_2 / ||f||_p for f = prod_j (1 + eps chi_j), exactly per level."""
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    out = []
    for n in n_list:
        lam = make_profile(n, "spherical", delta).lambdas
        num = math.sqrt(math.fsum(float(lam[a]) ** 2 * eps ** (2 * a) * math.comb(n, a) for a in range(n + 1)))
        log_den = (n / p) * math.log(((1.0 + eps) ** p + (1.0 - eps) ** p) / 2.0)
        out.append((n, num / math.exp(log_den)))
    return out


def p_of_delta(delta: float) -> float:
    return 1.0 + (1.0 - 2.0 * delta) ** 2


def norm_grid_K(theta="0.1", p0="1.02", deltas=None, p_grid=(1.25, 1.5, 1.75, 2.0)) -> list[tuple[float, float]]:
    """(delta, p) pairs on the lower boundary of the compact set
    {p >= p(delta), |1-2delta| >= theta} u {|1-2delta| <= theta, p >= p0},
    plus the points of ``p_grid`` above that boundary."""
    th, pz = exact(theta), exact(p0)
    if deltas is None:
        deltas = [Fraction(k, 20) for k in range(1, 20)]
    pairs = []
    for d in deltas:
        d = exact(d)
        if abs(1 - 2 * d) >= th:
            pmin = 1 + (1 - 2 * d) ** 2
        else:
            pmin = pz
        pmin = max(pmin, Fraction(1))
        ps = [float(pmin)] + [g for g in p_grid if g > pmin]
        pairs.extend((float(d), pv) for pv in ps if pv > 1.0)
    return pairs


# Pointwise comparison with Bernoulli noise


def comparison_constant(n: int, delta) -> Fraction:
    """[C(n,j) d^j (1-d)^(n-j)]^-1 with j the sphere radius and d = j/n."""
    j = sphere_radius(n, delta)
    d = Fraction(j, n)
    return 1 / (math.comb(n, j) * d**j * (1 - d) ** (n - j))


def check_theorem2(n: int, delta, trials: int = 100, seed: int = 0, c_limit: float = 3.0,
                   pointwise_max_n: int = 12) -> VerificationReport:
    """c(n, delta)/sqrt(n) <= c_limit, and T_delta f <= c N_{j/n} f pointwise for
    random integer-valued f >= 0, checked in exact integer arithmetic."""
    j = sphere_radius(n, delta)
    c = comparison_constant(n, delta)
    rep = VerificationReport("theorem2", n, {"delta": exact(delta), "radius": j, "c_limit": c_limit, "trials": trials})
    rep.extra["c"] = float(c)
    rep.extra["c_over_sqrt_n"] = float(c) / math.sqrt(n)
    rep.observe(c_limit - float(c) / math.sqrt(n), {"check": "c_over_sqrt_n"})
    if n > min(pointwise_max_n, max_cube_dim()):
        return rep
    rng = np.random.default_rng(seed)
    f = rng.integers(0, 1001, size=(trials, 1 << n)).astype(float)
    w = popcounts(n)
    t = build_table(n)
    kern = np.array([[t.k[r][wt] for wt in w] for r in range(n + 1)], dtype=float)
    # f * 1_{S_r} for every radius r; all intermediates are integers below 2^53
    sums = np.rint(wht_array(wht_array(f, n)[:, None, :] * kern[None, :, :], n) / (1 << n)).astype(np.int64)
    weights = np.array([j**r * (n - j) ** (n - r) for r in range(n + 1)], dtype=np.int64)
    noise = np.einsum("r,trx->tx", weights, sums)  # n^n * N_{j/n} f
    sphere = sums[:, j, :] * weights[j]  # n^n C(n,j) d^j(1-d)^(n-j) * T f
    margins = noise - sphere
    t_idx, x_idx = np.unravel_index(int(np.argmin(margins)), margins.shape)
    worst = int(margins[t_idx, x_idx])
    rep.cells_checked += int(margins.size) - 1
    # scale back to the units of f so that the margin is comparable across n
    rep.observe(Fraction(worst, n**n), {"check": "pointwise", "trial": int(t_idx), "x": int(x_idx)})
    rep.extra["pointwise_min_margin"] = Fraction(worst, n**n)
    return rep


# Asymptotic exponent rows for plots


def pi_norm_exponent_rows(p: float, grid_step: float = 0.005):
    """Rows (a/n, kkl, interpolated, lower) of lim (1/n) ln ||Pi_a||_{p->2} bounds, 0 < a/n < 1/2."""
    if not 1.0 < p <= 2.0:
        raise ValueError(f"p must lie in (1, 2], got {p}")
    pc = math.inf if p == 1.0 else p / (p - 1.0)
    m = int(round(0.5 / grid_step))
    for k in range(1, m):
        al = k * grid_step
        kkl = -0.5 * al * math.log(p - 1.0)
        interp = float(pi_envelope_exponent(p, al))
        lower = krawtchouk_lp_exponent(al, pc) - 0.5 * binary_entropy(al)
        yield al, kkl, interp, lower


def t_vs_n_rows(delta: float, p: float, grid_step: float = 0.005):
    """Rows (a/n, E_delta(a/n) - h(delta), (a/n) ln(1-2 delta), -interpolated Pi exponent, in_strip)."""
    if not 0.0 < delta < 0.5:
        raise ValueError(f"delta must lie in (0, 1/2), got {delta}")
    hd = binary_entropy(delta)
    xc = xi_crit(delta)
    m = int(round(0.5 / grid_step))
    for k in range(0, m + 1):
        al = k * grid_step
        t_exp = exponent_E(delta, al).e_value - hd
        n_exp = al * math.log(1.0 - 2.0 * delta) + 0.0  # avoid -0 at a = 0
        pi = -float(pi_envelope_exponent(p, al)) if al > 0 else 0.0
        yield al, t_exp, n_exp, pi, xc <= al <= 1.0 - xc
