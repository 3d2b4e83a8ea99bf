"""Finite bivariate biorthogonal M-Konhauser polynomials and identity checks."""
__version__ = "0.1.0"

from .kernels import BACKEND
from .scalar import DomainError, PoleError
from .report import VerificationReport
from .polys import (
    Params,
    bivariate_JK,
    bivariate_MK,
    companion_JK_Q,
    companion_Mcal,
    finite_M,
    jacobi_P,
    konhauser_Y,
    konhauser_Z,
    mittag_leffler_E,
)
from .quadrature import (
    build_rule,
    verify_konhauser_biorthogonality,
    verify_M_orthogonality,
    verify_MK_biorthogonality,
)
from .fourier import FourierParams

__all__ = [
    "__version__", "BACKEND", "DomainError", "PoleError", "VerificationReport", "Params",
    "bivariate_JK", "bivariate_MK", "companion_JK_Q", "companion_Mcal", "finite_M", "jacobi_P",
    "konhauser_Y", "konhauser_Z", "mittag_leffler_E", "build_rule",
    "verify_konhauser_biorthogonality", "verify_M_orthogonality", "verify_MK_biorthogonality",
    "FourierParams",
]
