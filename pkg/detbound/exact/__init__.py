"""Exact arithmetic core: rationals, eps-polynomials, matrices and roots."""

from .common import (
    CertificateStatus,
    DetboundError,
    FormatError,
    HypothesisViolated,
    InvalidOrder,
    NonConvergent,
    NotDiagonallyDominant,
    NotNonnegative,
    NotPolynomial,
    OrderTooLarge,
    Rational,
    SearchTimeout,
    Unconstructible,
    ZeroPolynomial,
    as_rational,
    format_rational,
    parse_rational,
)
from .matrix import (
    DenseMatrix,
    det_rational,
    det_symbolic,
    format_matrix,
    linear_pencil,
    parse_matrix,
    poly_matmul,
)
from .pattern import SignPattern, det_poly, format_pattern, parse_pattern
from .polynomial import EpsPolynomial, parse_polynomial
from .roots import RootBracket, compare_roots, count_roots, isolate_roots
from .spectral import (
    CertificateResult,
    SpectralEstimate,
    certify_rho_le_one,
    fredholm_det,
    fredholm_log_det,
    spectral_radius_estimate,
)

__all__ = [
    "CertificateResult",
    "CertificateStatus",
    "DenseMatrix",
    "DetboundError",
    "EpsPolynomial",
    "FormatError",
    "HypothesisViolated",
    "InvalidOrder",
    "NonConvergent",
    "NotDiagonallyDominant",
    "NotNonnegative",
    "NotPolynomial",
    "OrderTooLarge",
    "Rational",
    "RootBracket",
    "SearchTimeout",
    "SignPattern",
    "SpectralEstimate",
    "Unconstructible",
    "ZeroPolynomial",
    "as_rational",
    "certify_rho_le_one",
    "compare_roots",
    "count_roots",
    "det_poly",
    "det_rational",
    "det_symbolic",
    "format_matrix",
    "format_pattern",
    "format_rational",
    "fredholm_det",
    "fredholm_log_det",
    "isolate_roots",
    "linear_pencil",
    "parse_matrix",
    "parse_pattern",
    "parse_polynomial",
    "parse_rational",
    "poly_matmul",
    "spectral_radius_estimate",
]
