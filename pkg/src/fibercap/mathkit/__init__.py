"""Numerical kernels shared by the channel models."""

from .bessel import BACKEND, ComplexLog, log_bessel_i, log_iv_array, log_iv_real
from .cubic import (
    CubicCoeffs,
    NoPositiveRootError,
    RootConvergenceError,
    lambda_cubic,
    q_inverse,
    unique_positive_root,
)
from .noncentral import noncentral_expectation, rician_logpdf, rician_pdf
from .optimize import OptResult, grid_bracket, maximize_scalar, minimize_scalar
from .quadrature import DEFAULT_SPEC, QuadratureSpec, QuadResult, integrate, integrate_semi_infinite

__all__ = [
    "BACKEND",
    "ComplexLog",
    "CubicCoeffs",
    "DEFAULT_SPEC",
    "NoPositiveRootError",
    "OptResult",
    "QuadResult",
    "QuadratureSpec",
    "RootConvergenceError",
    "grid_bracket",
    "integrate",
    "integrate_semi_infinite",
    "lambda_cubic",
    "log_bessel_i",
    "log_iv_array",
    "log_iv_real",
    "maximize_scalar",
    "minimize_scalar",
    "noncentral_expectation",
    "q_inverse",
    "rician_logpdf",
    "rician_pdf",
    "unique_positive_root",
]
