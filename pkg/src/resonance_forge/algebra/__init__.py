"""Exact arithmetic kernel: rationals, pi-radical scalars, polynomials,
rational functions and fraction-free linear algebra over Q(m)."""

from .scalar import (
    ExactScalar,
    IncompatibleClassError,
    PoleError,
    Rational,
    gamma_exact,
    scalar_add,
    scalar_mul,
    scalar_to_float,
    squarefree_split,
)
from .poly import Poly, poly_gcd, resultant
from .bipoly import BiPoly, RatFunc
from .linalg import solve_nullspace

__all__ = [
    "Rational",
    "ExactScalar",
    "PoleError",
    "IncompatibleClassError",
    "gamma_exact",
    "scalar_mul",
    "scalar_add",
    "scalar_to_float",
    "squarefree_split",
    "Poly",
    "poly_gcd",
    "resultant",
    "BiPoly",
    "RatFunc",
    "solve_nullspace",
]
