"""Exact determinant bounds for perturbations of the identity."""

from .bounds import (
    BoundEntry,
    BoundTable,
    ExactExpression,
    attainable_upper_dets,
    bound_table,
    lower_bound_table,
    ostrowski_product_bound,
    theorem3_lower_bound,
    upper_bound_table,
)
from .constructors import (
    SkewHadamard,
    perturb_identity,
    skew_hadamard,
    skew_tri,
    toeplitz_F,
    verify_skew_hadamard,
)
from .envelope import Envelope, Piece, envelope_of
from .search import canonical_patterns, maxdet_at_one, search_maxdet
from .types import DetboundSettings
from .verify import (
    Status,
    VerificationReport,
    remark1_counterexample,
    sandwich_test,
    sharpness_check,
    theorem1_test,
    theorem4_check,
)

__version__ = "0.1.0"

__all__ = [
    "BoundEntry",
    "BoundTable",
    "DetboundSettings",
    "Envelope",
    "ExactExpression",
    "Piece",
    "SkewHadamard",
    "Status",
    "VerificationReport",
    "__version__",
    "attainable_upper_dets",
    "bound_table",
    "canonical_patterns",
    "envelope_of",
    "lower_bound_table",
    "maxdet_at_one",
    "ostrowski_product_bound",
    "perturb_identity",
    "remark1_counterexample",
    "sandwich_test",
    "search_maxdet",
    "sharpness_check",
    "skew_hadamard",
    "skew_tri",
    "theorem1_test",
    "theorem3_lower_bound",
    "theorem4_check",
    "toeplitz_F",
    "upper_bound_table",
    "verify_skew_hadamard",
]
