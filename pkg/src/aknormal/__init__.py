"""Exact formal normal forms for A_k slow-fast systems.

The hot loops (fraction-free elimination and truncated sparse polynomial
products) come from a compiled extension when available; ``BACKEND`` says
which one was loaded.
"""
__version__ = "0.1.0"

from ._backend import BACKEND
from .aksys import AkSystem, ValidationError, validate_ak_sfs, verify_kernel_trivial
from .exactalg import QMatrix, kernel_basis, rank, rref, solve
from .grading import enumerate_good_basis, enumerate_poly_basis, enumerate_vf_basis, weights
from .homology import matrix_of_box, matrix_of_d, matrix_of_dstar
from .normalize import normalize, verify_conjugacy
from .polyvf import Polynomial, VectorField, lie_bracket

__all__ = [
    "__version__",
    "BACKEND",
    "AkSystem",
    "ValidationError",
    "validate_ak_sfs",
    "verify_kernel_trivial",
    "QMatrix",
    "kernel_basis",
    "rank",
    "rref",
    "solve",
    "enumerate_good_basis",
    "enumerate_poly_basis",
    "enumerate_vf_basis",
    "weights",
    "matrix_of_box",
    "matrix_of_d",
    "matrix_of_dstar",
    "normalize",
    "verify_conjugacy",
    "Polynomial",
    "VectorField",
    "lie_bracket",
]
