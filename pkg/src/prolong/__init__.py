"""Exact Tanaka prolongation of graded nilpotent Lie algebras."""
from .exact_linalg import RatMatrix, Subspace, intersect, nullspace, rank, solve
from .lie_core import AlgebraError, GradedAlgebra, bracket, build_algebra, check_jacobi, is_fundamental
from .polynomials import Grading, WeightedPolynomial, contact_bracket, to_field, weight
from .prolongation import ProlongationResult, der0, iterated_prolongation, standard_prolongation, tanaka

__all__ = [
    "AlgebraError",
    "Grading",
    "GradedAlgebra",
    "ProlongationResult",
    "RatMatrix",
    "Subspace",
    "WeightedPolynomial",
    "bracket",
    "build_algebra",
    "check_jacobi",
    "contact_bracket",
    "der0",
    "intersect",
    "is_fundamental",
    "iterated_prolongation",
    "nullspace",
    "rank",
    "solve",
    "standard_prolongation",
    "tanaka",
    "to_field",
    "weight",
]
__version__ = "0.1.0"
