"""Exact extremality and factorizability analysis of unital quantum channels."""

from .channels import FamilySpec, KrausSet, apply_channel, build_family, check_ucpt, choi, from_generators
from .extremality import (IndependenceVerdict, extremality_verdict, gram_det_poly, independence,
                          set_independence, vec_det_poly)
from .field import ExScalar, mpq, parse_scalar, sqrt_rational
from .linalg import Mat, kron, partial_trace
from .poly import T, TPoly

__version__ = "0.1.0"

__all__ = [
    "ExScalar", "FamilySpec", "IndependenceVerdict", "KrausSet", "Mat", "T", "TPoly",
    "apply_channel", "build_family", "check_ucpt", "choi", "extremality_verdict", "from_generators",
    "gram_det_poly", "independence", "kron", "mpq", "parse_scalar", "partial_trace",
    "set_independence", "sqrt_rational", "vec_det_poly",
]
