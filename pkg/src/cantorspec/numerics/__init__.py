"""Shared numerical kernels: special functions, polynomial roots, quadrature."""

from .polynomial import (LogPolynomial, Polynomial, aberth_roots,
                         companion_roots, poly_roots)
from .quadrature import adaptive_gauss_kronrod, beta_weighted_integral
from .special import (complex_zeta, digamma, digamma_complex,
                      eta_series_direct, log_gamma, log_gamma_ratio, trigamma)

__all__ = [
    "LogPolynomial", "Polynomial", "aberth_roots", "companion_roots",
    "poly_roots", "adaptive_gauss_kronrod", "beta_weighted_integral",
    "complex_zeta", "digamma", "digamma_complex", "eta_series_direct",
    "log_gamma", "log_gamma_ratio", "trigamma",
]
