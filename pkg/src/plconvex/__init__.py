"""Exact verification that a PL surface in R^n bounds a convex polyhedron."""

from .complex import (
    DimensionError,
    FaceId,
    FacePoset,
    MissingLinkError,
    NotManifoldAtFace,
    ParseError,
    PLSurface,
    Star,
    ValidationReport,
    build_poset,
    extract_star,
    surface_from_polygons,
    validate_poset,
    validate_realization,
)
from .exact import PredicateAudit, QuotientMap, QuotientMode, affine_hull, det3, float_sign
from .fan import FanReason, FanStatus, FanVerdict, c_check
from .formats import FormatError, emit_surface, parse_surface
from .generator import GenError, GenSpec, generate
from .oracle import OracleVerdict, extreme_point_oracle, supporting_hyperplane_oracle
from .verifier import Mode, Report, Verdict, check_convexity, check_convexity_parallel

__version__ = "0.1.0"

__all__ = [
    "DimensionError", "FaceId", "FacePoset", "FanReason", "FanStatus", "FanVerdict",
    "FormatError", "GenError", "GenSpec", "MissingLinkError", "Mode", "NotManifoldAtFace",
    "OracleVerdict", "PLSurface", "ParseError", "PredicateAudit", "QuotientMap",
    "QuotientMode", "Report", "Star", "ValidationReport", "Verdict", "affine_hull",
    "build_poset", "c_check", "check_convexity", "check_convexity_parallel", "det3",
    "emit_surface", "extract_star", "extreme_point_oracle", "float_sign", "generate",
    "parse_surface", "supporting_hyperplane_oracle", "surface_from_polygons",
    "validate_poset", "validate_realization",
]
