"""Certified uniqueness checks for the simultaneous Pell equations
x^2 - a y^2 = 1, z^2 - b x^2 = 1."""

from .arith import Factorization, factorize, is_perfect_square, rational_square_root
from .bounds import BoundSet, ReductionInstance, baker_davenport_reduce, compute_bounds, compute_c_m
from .quadfield import QuadElem, fundamental_unit, pell_fundamental_solution
from .realcf import CertifiedReal, ContinuedFraction, expand_cf
from .verifier import (
    NOT_CERTIFIED,
    PAIRS,
    UNIQUE,
    Config,
    VerificationReport,
    brute_force_oracle,
    verify_b,
)

__version__ = "0.1.0"

__all__ = [
    "BoundSet", "CertifiedReal", "Config", "ContinuedFraction", "Factorization", "NOT_CERTIFIED",
    "PAIRS", "QuadElem", "ReductionInstance", "UNIQUE", "VerificationReport",
    "baker_davenport_reduce", "brute_force_oracle", "compute_bounds", "compute_c_m",
    "expand_cf", "factorize", "fundamental_unit", "is_perfect_square",
    "pell_fundamental_solution", "rational_square_root", "verify_b",
]
