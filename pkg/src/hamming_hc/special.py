"""Scalar helpers shared by the exact and asymptotic modules."""
from __future__ import annotations

import math
from decimal import Decimal
from fractions import Fraction

LN2 = math.log(2.0)


def binary_entropy(x: float) -> float:
    """h(x) = -x ln x - (1-x) ln(1-x) in nats, with 0 ln 0 = 0."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"binary entropy needs 0 <= x <= 1, got {x}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log(x) - (1.0 - x) * math.log1p(-x)


def xi_crit(delta: float) -> float:
    """Normalized location 1/2 - sqrt(delta(1-delta)) of the first Krawtchouk root."""
    if not 0.0 <= delta <= 0.5:
        raise ValueError(f"xi_crit needs 0 <= delta <= 1/2, got {delta}")
    return 0.5 - math.sqrt(delta * (1.0 - delta))


def exact(x) -> Fraction:
    """Convert a decimal string, int, float or Fraction to an exact rational.

    Floats go through their shortest decimal repr, so 0.174 means 174/1000.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(Decimal(repr(x)))
    if isinstance(x, str):
        return Fraction(Decimal(x.strip()))
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")
