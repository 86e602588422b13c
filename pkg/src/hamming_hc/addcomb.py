"""Cardinality bounds for sets whose sumset puts weight on a Hamming sphere.

For phi >= 0 the deconvolution ratio lambda = (phi, T phi)/||phi||_2^2 measures
how much of phi*phi sits on the sphere of radius j. Hypercontractivity of T then
caps ||phi||_2^2/||phi||_1^2, which is 2^n/|A| for phi = 1_A.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from .cube import CubeFunction, convolve_direct, max_cube_dim, popcounts, wht_array
from .krawtchouk import build_table
from .operators import level_energies, p_of_delta

DEFAULT_C = 2.0
FAMILIES = ("full", "singleton", "subcube", "ball", "sphere", "random")
RANDOM_DENSITIES = (0.5, 0.25, 0.125, 0.0625)
RANDOM_PER_DENSITY = 4
REL_TOL = 1e-12  # float rounding only; codim-1 subcubes meet the spectral-gap bound with equality


@dataclass
class DeconvReport:
    family: str
    label: str
    n: int
    j: int
    size: int
    lambda_achieved: float
    lambda_noise: float  # (phi, N_{j/n} phi)/||phi||_2^2, the quantity the spectral gap controls
    ratio: float
    bound: float
    sg_bound: float | None

    @property
    def passed(self) -> bool:
        if self.lambda_achieved <= 0:
            return True
        ok = self.ratio <= self.bound * (1.0 + REL_TOL)
        if self.sg_bound is not None:
            ok = ok and self.ratio <= self.sg_bound * (1.0 + REL_TOL)
        return ok


def _sphere_lambdas(n: int, j: int) -> np.ndarray:
    t = build_table(n)
    return np.array([float(t.ratio(j, a)) for a in range(n + 1)])


def deconvolution_ratio(phi: CubeFunction, j: int, method: str = "spectral") -> float:
    """(phi, T_j phi)/||phi||_2^2 with T_j the average over the sphere of radius j.

    ``method="direct"`` sums the self-convolution phi*phi over the sphere;
    ``method="spectral"`` weights the level energies of phi by K_j(a)/K_j(0).
    """
    n = phi.n
    if not 0 <= j <= n:
        raise ValueError(f"radius must lie in [0, {n}], got {j}")
    if np.any(phi.values < 0):
        raise ValueError("phi must be nonnegative")
    sq = float(np.dot(phi.values, phi.values))
    if sq == 0.0:
        raise ValueError("phi is identically zero")
    if method == "direct":
        auto = convolve_direct(phi, phi).values
        on_sphere = popcounts(n) == j
        return float(auto[on_sphere].sum()) / (math.comb(n, j) * sq)
    if method == "spectral":
        e = level_energies(phi)
        return float(np.dot(_sphere_lambdas(n, j), e) / e.sum())
    raise ValueError(f"unknown method {method!r}")


def corollary_bound(lam: float, eps: float, C: float = DEFAULT_C) -> float:
    """(C/lambda)^(2p/(2-p)) with p = 1 + (1-2 eps)^2."""
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    p = p_of_delta(eps)
    if p >= 2.0:
        raise ValueError(f"eps={eps} gives p=2; the bound degenerates")
    if lam <= 0:
        return math.inf
    return (C / lam) ** (2.0 * p / (2.0 - p))


def spectral_gap_bound(lam: float, delta: float) -> float | None:
    """2 delta/(lambda - (1 - 2 delta)) when lambda > 1 - 2 delta, else None."""
    if not 0.0 < delta <= 0.5:
        raise ValueError(f"delta must lie in (0, 1/2], got {delta}")
    gap = lam - (1.0 - 2.0 * delta)
    if gap <= 0:
        return None
    return 2.0 * delta / gap


def _family_sets(n: int, family: str, rng: np.random.Generator):
    size = 1 << n
    w = popcounts(n)
    idx = np.arange(size)
    if family == "full":
        yield "full", np.ones(size, dtype=bool)
    elif family == "singleton":
        yield "point0", idx == 0
    elif family == "subcube":
        for k in range(n + 1):
            # the last k coordinates are fixed to 0
            yield f"codim{k}", (idx >> (n - k)) == 0
    elif family == "ball":
        for r in range(n + 1):
            yield f"radius{r}", w <= r
    elif family == "sphere":
        for r in range(n + 1):
            yield f"radius{r}", w == r
    elif family == "random":
        for d in RANDOM_DENSITIES:
            for t in range(RANDOM_PER_DENSITY):
                mask = rng.random(size) < d
                if not mask.any():
                    mask[rng.integers(size)] = True
                yield f"density{d:g}[{t}]", mask
    else:
        raise ValueError(f"unknown family {family!r}; choose from {FAMILIES}")


def check_corollary(n: int, family: str = "all", eps: float = 0.25, C: float = DEFAULT_C,
                    seed: int = 0) -> list[DeconvReport]:
    """Every (A, j) with eps n <= j <= (1-eps) n, for the sets of ``family``.

    The sphere ratio of 1_A is counted exactly: the number of pairs in A^2 whose
    sum has weight j, over |A| C(n, j).
    """
    if n < 1 or n > max_cube_dim():
        raise ValueError(f"n must lie in [1, {max_cube_dim()}], got {n}")
    if not 0.0 < eps < 0.5:
        raise ValueError(f"eps must lie in (0, 1/2), got {eps}")
    families = FAMILIES if family == "all" else (family,)
    rng = np.random.default_rng(seed)
    js = range(math.ceil(eps * n), math.floor((1 - eps) * n) + 1)
    w = popcounts(n)
    reports = []
    for fam in families:
        for label, mask in _family_sets(n, fam, rng):
            phi = CubeFunction(n, mask.astype(float))
            e = level_energies(phi)
            hat = wht_array(phi.values, n)
            # auto[x] = #{(a, b) in A^2 : a + b = x}, an exact integer below 2^53
            auto = np.rint(wht_array(hat * hat, n) / (1 << n)).astype(np.int64)
            pairs_at = np.bincount(w, weights=auto, minlength=n + 1).astype(np.int64)
            size = int(mask.sum())
            ratio = (1 << n) / size
            for j in js:
                lam = float(Fraction(int(pairs_at[j]), size * math.comb(n, j)))
                delta = j / n
                lam_noise = float(np.dot((1.0 - 2.0 * delta) ** np.arange(n + 1), e) / e.sum())
                sg = spectral_gap_bound(lam_noise, delta) if delta <= 0.5 else None
                bound = corollary_bound(lam, eps, C)
                reports.append(DeconvReport(fam, label, n, j, size, lam, lam_noise, ratio, bound, sg))
    return reports


def reports_to_csv(reports: list[DeconvReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["family", "label", "n", "j", "lambda", "ratio", "hc_bound", "sg_bound_or_nan"])
    for r in reports:
        sg = r.sg_bound if r.sg_bound is not None else math.nan
        w.writerow([r.family, r.label, r.n, r.j, f"{r.lambda_achieved:.17g}", f"{r.ratio:.17g}",
                    f"{r.bound:.17g}", f"{sg:.17g}"])
    return buf.getvalue()


def reports_to_records(reports: list[DeconvReport]) -> list[dict]:
    out = []
    for r in reports:
        d = asdict(r)
        d["passed"] = r.passed
        if math.isinf(d["bound"]):
            d["bound"] = None
        out.append(d)
    return out
