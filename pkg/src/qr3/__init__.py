"""Exact rank-3 quadric certificates for the quadratic ideals of curves."""

from .certify import (
    ENGINE_VERSION,
    LemmaReport,
    OracleVerdict,
    Qr3Certificate,
    VerificationReport,
    build_certificate,
    cone_pullback,
    lemma22_check,
    oracle_rank3_span,
    pencil_certificate,
    verify_certificate,
)
from .curves import (
    INFINITY,
    AffinePoint,
    EllipticQuarticCuspidal,
    EllipticQuarticNodal,
    EllipticSmooth,
    ProjectivePoint,
    RationalNormal,
    SectionSpace,
    canonical_sections,
    eval_section,
    parse_curve,
    sample_points,
    section_product,
    vanishing_subspace,
)
from .field import FieldSpec, Scalar
from .ideal import generated_in_degree_3, membership, quadric_space
from .linalg import Matrix, binary_form_roots, det_pencil, kernel_basis, rank, rref, symmetric_rank
from .quadric import QuadraticForm

__version__ = "0.1.0"

__all__ = [
    "ENGINE_VERSION",
    "INFINITY",
    "AffinePoint",
    "EllipticQuarticCuspidal",
    "EllipticQuarticNodal",
    "EllipticSmooth",
    "FieldSpec",
    "LemmaReport",
    "Matrix",
    "OracleVerdict",
    "ProjectivePoint",
    "QuadraticForm",
    "Qr3Certificate",
    "RationalNormal",
    "Scalar",
    "SectionSpace",
    "VerificationReport",
    "binary_form_roots",
    "build_certificate",
    "canonical_sections",
    "cone_pullback",
    "det_pencil",
    "eval_section",
    "generated_in_degree_3",
    "kernel_basis",
    "lemma22_check",
    "membership",
    "oracle_rank3_span",
    "parse_curve",
    "pencil_certificate",
    "quadric_space",
    "rank",
    "rref",
    "sample_points",
    "section_product",
    "symmetric_rank",
    "vanishing_subspace",
    "verify_certificate",
]
