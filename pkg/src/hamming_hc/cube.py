"""Real-valued functions on the Hamming cube F_2^n.

A point x of F_2^n is an integer bitmask: bit j of the index is coordinate x_j.
Norms and inner products are taken against the uniform probability measure,
so ``lp_norm(ones, p) == 1`` for every p.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

DEFAULT_MAX_N = 24


def max_cube_dim() -> int:
    """Largest n for which 2^n-length storage is allowed (env ``HH_MAX_N``)."""
    raw = os.environ.get("HH_MAX_N")
    if raw is None:
        return DEFAULT_MAX_N
    return int(raw)


@dataclass(frozen=True, eq=False)
class CubeFunction:
    """A function F_2^n -> R stored as a length-2^n float array."""

    n: int
    values: np.ndarray

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.n!r}")
        if self.n > max_cube_dim():
            raise ValueError(f"n={self.n} exceeds the configured maximum {max_cube_dim()} (HH_MAX_N)")
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (1 << self.n,):
            raise ValueError(f"expected {1 << self.n} values for n={self.n}, got shape {vals.shape}")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "values", vals)

    @property
    def size(self) -> int:
        return 1 << self.n

    def __add__(self, other: CubeFunction) -> CubeFunction:
        _check_same_dim(self, other)
        return CubeFunction(self.n, self.values + other.values)

    def __sub__(self, other: CubeFunction) -> CubeFunction:
        _check_same_dim(self, other)
        return CubeFunction(self.n, self.values - other.values)

    def __mul__(self, c: float) -> CubeFunction:
        return CubeFunction(self.n, self.values * c)

    __rmul__ = __mul__

    def __repr__(self):
        return f"CubeFunction(n={self.n}, values=<{self.size} floats>)"

    # Constructors used throughout the package and the tests.

    @classmethod
    def constant(cls, n: int, c: float = 1.0) -> CubeFunction:
        return cls(n, np.full(1 << n, float(c)))

    @classmethod
    def delta(cls, n: int, x: int = 0) -> CubeFunction:
        v = np.zeros(1 << n)
        v[x] = 1.0
        return cls(n, v)

    @classmethod
    def character(cls, n: int, v: int) -> CubeFunction:
        """chi_v(x) = (-1)^<v,x>."""
        return cls(n, 1.0 - 2.0 * (popcounts(n)[np.arange(1 << n) & v] % 2))

    @classmethod
    def sphere_indicator(cls, n: int, j: int) -> CubeFunction:
        return cls(n, (popcounts(n) == j).astype(float))

    @classmethod
    def even_indicator(cls, n: int) -> CubeFunction:
        return cls(n, (popcounts(n) % 2 == 0).astype(float))

    @classmethod
    def epsilon_product(cls, n: int, eps: float) -> CubeFunction:
        """prod_j (1 + eps*chi_j) = (1+eps)^(n-|x|) (1-eps)^|x|."""
        w = popcounts(n)
        return cls(n, (1.0 + eps) ** (n - w) * (1.0 - eps) ** w)

    @classmethod
    def indicator(cls, n: int, points) -> CubeFunction:
        v = np.zeros(1 << n)
        v[np.asarray(list(points), dtype=np.int64)] = 1.0
        return cls(n, v)


def _check_same_dim(f: CubeFunction, g: CubeFunction):
    if f.n != g.n:
        raise ValueError(f"dimension mismatch: {f.n} vs {g.n}")


_POPCOUNT_CACHE: dict[int, np.ndarray] = {}


def popcounts(n: int) -> np.ndarray:
    """Hamming weights |x| for x = 0..2^n-1."""
    w = _POPCOUNT_CACHE.get(n)
    if w is None:
        w = np.zeros(1 << n, dtype=np.int64)
        for j in range(n):
            w[1 << j : 1 << (j + 1)] = w[: 1 << j] + 1
        w.flags.writeable = False
        _POPCOUNT_CACHE[n] = w
    return w


def wht_array(a: np.ndarray, n: int) -> np.ndarray:
    """Unnormalized Walsh-Hadamard butterfly along the last axis.

    Works on float or object (Python int) arrays, batched over leading axes.
    """
    out = np.array(a, copy=True)
    lead = out.shape[:-1]
    for j in range(n):
        v = out.reshape(*lead, -1, 2, 1 << j)
        lo = v[..., 0, :].copy()
        hi = v[..., 1, :]
        v[..., 0, :] = lo + hi
        v[..., 1, :] = lo - hi
    return out


def wht(f: CubeFunction) -> CubeFunction:
    """f_hat(w) = sum_x (-1)^<w,x> f(x). Applying it twice multiplies by 2^n."""
    return CubeFunction(f.n, wht_array(f.values, f.n))


def lp_norm(f: CubeFunction, p: float) -> float:
    """(E|f|^p)^(1/p) under the uniform measure; p = inf gives max |f|."""
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    a = np.abs(f.values)
    if math.isinf(p):
        return float(a.max())
    m = a.max()
    if m == 0:
        return 0.0
    # scale by the max to avoid overflow for large p
    return float(m * np.mean((a / m) ** p) ** (1.0 / p))


def inner_product(f: CubeFunction, g: CubeFunction) -> float:
    _check_same_dim(f, g)
    return float(np.dot(f.values, g.values)) / f.size


def convolve(f: CubeFunction, g: CubeFunction) -> CubeFunction:
    """(f*g)(x) = sum_y f(x+y) g(y), computed through the transform."""
    _check_same_dim(f, g)
    h = wht_array(wht_array(f.values, f.n) * wht_array(g.values, g.n), f.n)
    return CubeFunction(f.n, h / f.size)


def convolve_direct(f: CubeFunction, g: CubeFunction) -> CubeFunction:
    """O(4^n) reference convolution."""
    _check_same_dim(f, g)
    idx = np.arange(f.size)
    out = np.zeros(f.size)
    for y in range(f.size):
        if g.values[y] != 0:
            out += f.values[idx ^ y] * g.values[y]
    return CubeFunction(f.n, out)


def even_odd_split(f: CubeFunction) -> tuple[CubeFunction, CubeFunction]:
    """Split f by the parity of |x|; the parts have disjoint supports."""
    even = popcounts(f.n) % 2 == 0
    return (
        CubeFunction(f.n, np.where(even, f.values, 0.0)),
        CubeFunction(f.n, np.where(even, 0.0, f.values)),
    )
