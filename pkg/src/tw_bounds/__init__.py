"""
Bound evaluation: each inequality reported as lower / exact / upper with
slacks, tightness and vacuity flags.
"""
from .models import (
    BoundReport,
    BoundsConfig,
    ClassPair,
    FullReport,
    IdentityCheck,
    MonotonicityReport,
    SeparationReport,
)
from .bounds import (
    full_report,
    greens_bounds,
    hitting_time_bounds,
    monotonicity_check,
    separation_defect,
    separation_defect_from_a,
)
from .identities import proof_identities

__all__ = [
    "BoundReport",
    "BoundsConfig",
    "ClassPair",
    "FullReport",
    "IdentityCheck",
    "MonotonicityReport",
    "SeparationReport",
    "full_report",
    "greens_bounds",
    "hitting_time_bounds",
    "monotonicity_check",
    "proof_identities",
    "separation_defect",
    "separation_defect_from_a",
]
