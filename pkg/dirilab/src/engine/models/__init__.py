from dirilab.src.engine.models.core import (
    ExactRational,
    Finding,
    HighPrecision,
    LabModel,
    format_rational,
)
from dirilab.src.engine.models.reports import (
    ApproximationReport,
    AuditReport,
    CasselsReport,
    CrossValidationReport,
    DimensionEstimate,
    EvidenceReport,
    GapReport,
    HolderAudit,
    LevelHolderFit,
    NormalizationReport,
    PressureSolution,
    SandwichReport,
    SeriesVerdict,
    TrendReport,
    TrendRow,
    WindowWitness,
)

__all__ = [
    "ApproximationReport",
    "AuditReport",
    "CasselsReport",
    "CrossValidationReport",
    "DimensionEstimate",
    "EvidenceReport",
    "ExactRational",
    "Finding",
    "GapReport",
    "HighPrecision",
    "HolderAudit",
    "LabModel",
    "LevelHolderFit",
    "NormalizationReport",
    "PressureSolution",
    "SandwichReport",
    "SeriesVerdict",
    "TrendReport",
    "TrendRow",
    "WindowWitness",
    "format_rational",
]
