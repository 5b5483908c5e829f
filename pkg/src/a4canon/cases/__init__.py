"""The case table: data model, file format and point-wise calculus."""

from .grammar import CaseFileError, bundled_text, load_bundled, load_cases, parse_cases, parse_linform
from .model import (
    CaseSpec,
    CaseTable,
    CoeffFactor,
    ExponentExpr,
    Inequality,
    LinForm,
    Region,
    SumVar,
)
from .ops import (
    DIAGRAM_SYMMETRY,
    IDENTITY_SYMMETRY,
    CoverageReport,
    RegionViolation,
    SymmetryConfig,
    TranscriptionError,
    apply_config,
    apply_symmetry,
    coverage_stats,
    index_height,
    instantiate,
    locate,
    region_contains,
    sample_points,
    strict_count,
)

__all__ = [
    "CaseFileError",
    "bundled_text",
    "load_bundled",
    "load_cases",
    "parse_cases",
    "parse_linform",
    "CaseSpec",
    "CaseTable",
    "CoeffFactor",
    "ExponentExpr",
    "Inequality",
    "LinForm",
    "Region",
    "SumVar",
    "DIAGRAM_SYMMETRY",
    "IDENTITY_SYMMETRY",
    "CoverageReport",
    "RegionViolation",
    "SymmetryConfig",
    "TranscriptionError",
    "apply_config",
    "apply_symmetry",
    "coverage_stats",
    "index_height",
    "instantiate",
    "locate",
    "region_contains",
    "sample_points",
    "strict_count",
]
