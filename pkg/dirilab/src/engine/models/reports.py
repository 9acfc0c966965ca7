from typing import Dict, List, Literal, Optional, Tuple

from pydantic import Field

from dirilab.src.engine.models.core import ExactRational, Finding, HighPrecision, LabModel

CaseTag = Literal["I", "II", "III"]

DStatus = Literal["improvable-evidence", "non-improvable-evidence", "indeterminate"]


class CasselsReport(LabModel):
    n: int
    theta_next: ExactRational
    phi_n: ExactRational
    lhs: ExactRational
    rhs: ExactRational
    residual: ExactRational


class ApproximationReport(LabModel):
    """Two-sided approximation bounds at a convergent."""

    n: int
    distance: ExactRational
    identity_value: ExactRational
    lower_bound: ExactRational
    upper_bound: ExactRational
    within_bounds: bool


class GapReport(LabModel):
    word: Tuple[int, ...]
    case_tag: CaseTag
    length: ExactRational
    left_gap: Optional[ExactRational] = None
    right_gap: Optional[ExactRational] = None
    min_gap: ExactRational
    case_lower_bound: ExactRational
    ratio_to_length: ExactRational

    @property
    def satisfies_bound(self) -> bool:
        return self.min_gap >= self.case_lower_bound


class EvidenceReport(LabModel):
    depth: int
    g_witnesses: List[int] = Field(default_factory=list)
    k_witnesses: List[int] = Field(default_factory=list)
    d_status: DStatus
    first_undetermined: Optional[int] = None
    threshold: int


class SeriesVerdict(LabModel):
    s: ExactRational
    verdict: Literal["converges", "diverges", "unknown"]
    method: Literal["exponent-comparison", "partial-sum-heuristic"]
    critical_s: Optional[ExactRational] = None


class WindowWitness(LabModel):
    """Quotients at one window of a constructed word."""

    k: int
    index: int
    forced_quotient: int
    window_quotient: int
    q_before: int
    g_witness: bool
    k_avoidance: bool


class SandwichReport(LabModel):
    k: int
    Q: int
    n_k: int
    q_anchor: int
    lower_ok: bool
    upper_ok: bool

    @property
    def satisfied(self) -> bool:
        return self.lower_ok and self.upper_ok


class PressureSolution(LabModel):
    L: int
    M: int
    tau: ExactRational
    S: HighPrecision
    bracket: Tuple[HighPrecision, HighPrecision]
    residual: HighPrecision
    evaluations: int
    precision_bits: int = 128


class TrendRow(LabModel):
    M: int
    S: HighPrecision
    distance: HighPrecision
    residual: HighPrecision
    evaluations: int


class TrendReport(LabModel):
    L: int
    tau: ExactRational
    target: HighPrecision
    rows: List[TrendRow]
    s_increasing: bool
    distance_weakly_decreasing: bool


class NormalizationReport(LabModel):
    level: int
    node_count: int
    total_mass: HighPrecision
    deviation: HighPrecision
    max_parent_deviation: HighPrecision
    findings: List[Finding] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.findings


class LevelHolderFit(LabModel):
    level: int
    slope: float
    count: int


class HolderAudit(LabModel):
    kind: Literal["intervals", "balls"]
    levels: List[int]
    exponent_target: float
    fitted_slope: float
    intercept: float
    max_ratio: float
    sample_size: int
    margin: float
    per_level: List[LevelHolderFit] = Field(default_factory=list)
    per_case_slope: Dict[str, float] = Field(default_factory=dict)
    per_case_max_ratio: Dict[str, float] = Field(default_factory=dict)
    excluded: int = 0
    warnings: List[str] = Field(default_factory=list)

    @property
    def meets_target(self) -> bool:
        return self.fitted_slope >= self.exponent_target - self.margin


class DimensionEstimate(LabModel):
    method: Literal["box-count", "mdp-fit"]
    value: float
    levels_used: List[int]
    residual: float
    points: List[Tuple[float, float]] = Field(default_factory=list)


class CrossValidationReport(LabModel):
    S: float
    formula: float
    tolerance: float
    estimates: Dict[str, float]
    distances: Dict[str, float]
    within_tolerance: Dict[str, bool]
    lower_bound_consistent: bool


class AuditReport(LabModel):
    checks: List[str] = Field(default_factory=list)
    samples: Dict[str, int] = Field(default_factory=dict)
    findings: List[Finding] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.findings
