"""Exact verification toolkit for hyperplane arrangements, their Fermat covers
and determinantal symmetric differentials."""

from .arrangement import (
    Arrangement,
    NormalizedArrangement,
    build_A2,
    check_linear_general_position,
    check_quadric_general_position,
    normalize,
    select_subarrangement,
)
from .certify import Certificate, certify_hyperbolicity, restrict_to_stratum, thresholds
from .differentials import (
    baselocus_evidence,
    extra_vanishing_order,
    generate_section,
    generate_sigma,
    rank_W_minor,
    verify_bw_factorization,
    verify_chart_compatibility,
    verify_cramer_annihilation,
)
from .exactalg import Matrix, det, mth_root, rank
from .fermat import FermatCover, build_cover, sample_point, smoothness_probe, standard_lines_exist
from .mpoly import CoverIdealRewriter, MPoly

__version__ = "0.1.0"

__all__ = [
    "Arrangement",
    "Certificate",
    "CoverIdealRewriter",
    "FermatCover",
    "MPoly",
    "Matrix",
    "NormalizedArrangement",
    "baselocus_evidence",
    "build_A2",
    "build_cover",
    "certify_hyperbolicity",
    "check_linear_general_position",
    "check_quadric_general_position",
    "det",
    "extra_vanishing_order",
    "generate_section",
    "generate_sigma",
    "mth_root",
    "normalize",
    "rank",
    "rank_W_minor",
    "restrict_to_stratum",
    "sample_point",
    "select_subarrangement",
    "smoothness_probe",
    "standard_lines_exist",
    "thresholds",
    "verify_bw_factorization",
    "verify_chart_compatibility",
    "verify_cramer_annihilation",
]
