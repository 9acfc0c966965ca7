"""
Audit runner: executes every property check over one schedule and collects
Finding records. A clean run returns an AuditReport without findings.
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional

import numpy as np

from dirilab.src.config import (
    DEFAULT_CONSISTENCY_TOLERANCE,
    DEFAULT_HOLDER_MARGIN,
    DEFAULT_LEVEL_BUDGET,
    DEFAULT_MASS_TOLERANCE,
    DEFAULT_PRECISION_BITS,
    DEFAULT_SEED,
    DEFAULT_SOLVER_TOLERANCE,
)
from dirilab.src.engine.cantor import enumerate_level, sample_point, window_witnesses
from dirilab.src.engine.cf_core import (
    CFWord,
    approximation_bounds,
    cassels_check,
    cf_expand,
    continuant_properties,
)
from dirilab.src.engine.classification import PsiSpec, inclusion_audit
from dirilab.src.engine.dimension import four_interval_check, holder_audit_intervals
from dirilab.src.engine.geometry import (
    children_hull,
    gap_lower_bound,
    length_bracket,
    pairwise_disjoint,
)
from dirilab.src.engine.measure import assign_measure, normalization_audit
from dirilab.src.engine.models import AuditReport, Finding
from dirilab.src.engine.pressure import solve_S
from dirilab.src.engine.schedule import CantorSchedule

logger = logging.getLogger(__name__)

FAULTS = ("gap-bound",)


@dataclass
class AuditSettings:
    depth: int = 7
    seed: int = DEFAULT_SEED
    word_length: int = 5
    quotient_cap: int = 4
    cassels_samples: int = 500
    cassels_max_denominator: int = 10**6
    witness_samples: int = 200
    inclusion_samples: int = 200
    precision_bits: int = DEFAULT_PRECISION_BITS
    solver_tolerance: float = DEFAULT_SOLVER_TOLERANCE
    mass_tolerance: float = DEFAULT_MASS_TOLERANCE
    consistency_tolerance: float = DEFAULT_CONSISTENCY_TOLERANCE
    holder_margin: float = DEFAULT_HOLDER_MARGIN
    level_budget: int = DEFAULT_LEVEL_BUDGET
    inject_fault: Optional[str] = None


def audit_continuants(word_length: int, quotient_cap: int) -> List[Finding]:
    """Exhaustive continuant and approximation-bound checks on all small words."""
    findings: List[Finding] = []
    for n in range(1, word_length + 1):
        for quotients in itertools.product(range(1, quotient_cap + 1), repeat=n):
            word = CFWord(quotients)
            findings.extend(continuant_properties(word))
            if quotients[-1] < 2:
                continue
            x = word.value
            if cf_expand(x) != word:
                findings.append(
                    Finding(
                        check="round-trip",
                        subject=str(word),
                        observed=str(cf_expand(x)),
                        bound=str(word),
                    )
                )
            for k in range(0, n - 1):
                report = approximation_bounds(x, k)
                if not report.within_bounds or report.distance != report.identity_value:
                    findings.append(
                        Finding(
                            check="approximation-bounds",
                            subject=f"{word} n={k}",
                            observed=str(report.distance),
                            bound=f"({report.lower_bound}, {report.upper_bound})",
                        )
                    )
    return findings


def audit_cassels(samples: int, max_denominator: int, seed: int) -> List[Finding]:
    """Cassels residual must vanish at every valid index of seeded random rationals."""
    rng = np.random.default_rng(seed)
    findings: List[Finding] = []
    for _ in range(samples):
        q = int(rng.integers(2, max_denominator + 1))
        p = int(rng.integers(1, q))
        x = Fraction(p, q)
        for n in range(1, cf_expand(x).n):
            report = cassels_check(x, n)
            if report.residual != 0:
                findings.append(
                    Finding(
                        check="cassels",
                        subject=f"x={x} n={n}",
                        observed=str(report.residual),
                        bound="0",
                    )
                )
    return findings


def audit_geometry(
    schedule: CantorSchedule, depth: int, budget: int, inject_fault: Optional[str] = None
) -> List[Finding]:
    """
    Disjointness, nesting, length brackets and gap lower bounds at levels 1..depth.

    The gap of J_n is its distance to the nearest other interval of the full
    level, measured against the lower bound of its case.
    """
    findings: List[Finding] = []
    fault_pending = inject_fault == "gap-bound"
    parents = {(): children_hull(CFWord(()), *schedule.children_range(CFWord(())))}
    for n in range(1, depth + 1):
        level = enumerate_level(schedule, n, budget, exhaustive=True)
        for a, b in pairwise_disjoint(level.intervals):
            findings.append(
                Finding(
                    check="disjoint",
                    subject=f"level {n}",
                    observed=f"{a} meets {b}",
                    bound="disjoint",
                )
            )
        current = {}
        for entry in level.entries:
            word = entry.word
            current[word.quotients] = entry.interval
            mother = parents[word.quotients[:-1]]
            if not mother.contains_interval(entry.interval):
                findings.append(
                    Finding(
                        check="nested",
                        subject=str(word),
                        observed=str(entry.interval),
                        bound=str(mother),
                    )
                )
            for bracket in length_bracket(word, schedule):
                if not bracket.contains(entry.interval.length):
                    findings.append(
                        Finding(
                            check=f"length-{bracket.case_tag}",
                            subject=str(word),
                            observed=str(entry.interval.length),
                            bound=bracket.describe(),
                        )
                    )
        ordered = sorted(level.entries, key=lambda e: e.interval.left)
        for i, entry in enumerate(ordered):
            gaps = [
                entry.interval.distance_to(ordered[j].interval)
                for j in (i - 1, i + 1)
                if 0 <= j < len(ordered)
            ]
            if not gaps:
                continue
            min_gap, length = min(gaps), entry.interval.length
            bound = gap_lower_bound(entry.case_tag, length, schedule.M)
            if fault_pending:
                bound = 2 * min_gap
                fault_pending = False
            if min_gap < bound:
                findings.append(
                    Finding(
                        check=f"gap-{entry.case_tag}",
                        subject=str(entry.word),
                        observed=str(min_gap),
                        bound=str(bound),
                        detail=f"ratio to length {float(min_gap / length):.4f}",
                    )
                )
        parents = current
    return findings


def audit_witnesses(schedule: CantorSchedule, samples: int, seed: int) -> List[Finding]:
    """Sampled words crossing windows carry a G witness and avoid the K condition."""
    depth = schedule.window_indices[-1]
    findings: List[Finding] = []
    for i in range(samples):
        word = sample_point(schedule, depth, seed + i)
        if not schedule.contains(word):
            findings.append(
                Finding(
                    check="sample-admissible", subject=str(word), observed="rejected", bound="D_n"
                )
            )
        for witness in window_witnesses(word, schedule):
            if not (witness.g_witness and witness.k_avoidance):
                findings.append(
                    Finding(
                        check="window-witness",
                        subject=f"{word} k={witness.k}",
                        observed=(
                            f"a={witness.forced_quotient},{witness.window_quotient} "
                            f"q={witness.q_before}"
                        ),
                        bound="a_{n-1} a_n >= q^tau and a_n <= q^tau/2",
                    )
                )
    return findings


def run_audits(
    schedule: CantorSchedule,
    settings: Optional[AuditSettings] = None,
    on_check: Optional[Callable[[str], None]] = None,
) -> AuditReport:
    """
    Run every audit against one schedule.

    Args:
        schedule: E_M schedule under audit
        settings: Sample sizes, tolerances and the optional fault hook
        on_check: Called with each check name before it runs

    Returns:
        AuditReport with the checks run, sample sizes and all findings
    """
    settings = settings or AuditSettings()
    if settings.inject_fault is not None and settings.inject_fault not in FAULTS:
        raise ValueError(f"unknown fault {settings.inject_fault!r}; known: {', '.join(FAULTS)}")

    checks: List[str] = []
    findings: List[Finding] = []

    def step(name: str) -> None:
        checks.append(name)
        if on_check is not None:
            on_check(name)
        logger.debug("audit check: %s", name)

    step("continuants")
    findings.extend(audit_continuants(settings.word_length, settings.quotient_cap))

    step("cassels")
    findings.extend(
        audit_cassels(settings.cassels_samples, settings.cassels_max_denominator, settings.seed)
    )

    step("geometry")
    findings.extend(
        audit_geometry(schedule, settings.depth, settings.level_budget, settings.inject_fault)
    )

    step("witnesses")
    findings.extend(audit_witnesses(schedule, settings.witness_samples, settings.seed))

    step("inclusion")
    spec = PsiSpec.power(schedule.tau)
    depth = schedule.window_indices[-1]
    words = [
        sample_point(schedule, depth, settings.seed + i)
        for i in range(settings.inclusion_samples)
    ]
    findings.extend(inclusion_audit(words, spec))

    step("normalization")
    solution = solve_S(
        schedule.L, schedule.M, schedule.tau, settings.solver_tolerance, settings.precision_bits
    )
    tree = assign_measure(
        schedule,
        solution,
        settings.depth,
        settings.level_budget,
        precision_bits=settings.precision_bits,
    )
    for n in range(1, settings.depth + 1):
        report = normalization_audit(
            tree, n, settings.mass_tolerance, settings.consistency_tolerance
        )
        findings.extend(report.findings)

    step("holder")
    holder = holder_audit_intervals(tree, margin=settings.holder_margin)
    if not holder.meets_target:
        findings.append(
            Finding(
                check="holder-intervals",
                subject=f"levels {holder.levels[0]}..{holder.levels[-1]}",
                observed=f"{holder.fitted_slope:.6f}",
                bound=f">= {holder.exponent_target - holder.margin:.6f}",
            )
        )
    findings.extend(four_interval_check(tree))

    return AuditReport(
        checks=checks,
        samples={
            "cassels": settings.cassels_samples,
            "witnesses": settings.witness_samples,
            "inclusion": settings.inclusion_samples,
            "levels": settings.depth,
        },
        findings=findings,
    )
