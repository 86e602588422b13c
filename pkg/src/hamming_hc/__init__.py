"""Spectral analysis of symmetric convolution operators on the binary hypercube.

Exact Krawtchouk tables, saddle-point exponents, p->2 norm estimates for the
spherical average and the additive-combinatorics bounds that follow from them.
"""
from .cube import CubeFunction, convolve, lp_norm, wht
from .krawtchouk import KrawtchoukTable, build_table
from .operators import MultiplierProfile, NormEstimate, apply, make_profile, norm_lower_search
from .report import VerificationReport

__all__ = [
    "CubeFunction",
    "KrawtchoukTable",
    "MultiplierProfile",
    "NormEstimate",
    "VerificationReport",
    "apply",
    "build_table",
    "convolve",
    "lp_norm",
    "make_profile",
    "norm_lower_search",
    "wht",
]

__version__ = "0.1.0"
