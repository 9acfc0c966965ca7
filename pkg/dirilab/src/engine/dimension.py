"""
Empirical dimension estimators over materialized measure trees and level covers.

Interval and ball Holder audits regress log-mass against log-size; the mass
distribution fit takes the smallest per-level ball exponent; box counting
regresses log cover size against log inverse mesh over the block levels.
"""

import bisect
import logging
import math
from collections import defaultdict
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from mpmath import mp, mpf

from dirilab.src.config import (
    DEFAULT_ESTIMATOR_TOLERANCE,
    DEFAULT_HOLDER_MARGIN,
    DEFAULT_LOWER_BOUND_SLACK,
    DEFAULT_SEED,
)
from dirilab.src.engine.errors import InsufficientDataError
from dirilab.src.engine.geometry import Interval, cylinder
from dirilab.src.engine.measure import MeasureNode, MeasureTree
from dirilab.src.engine.models import (
    CrossValidationReport,
    DimensionEstimate,
    Finding,
    HolderAudit,
    LevelHolderFit,
)

logger = logging.getLogger(__name__)

MIN_REGRESSION_POINTS = 3

# smallest ball radius is 2^(CONTROL_RADIUS_OFFSET) deepest-level intervals
CONTROL_RADIUS_OFFSET = 6

FOUR_INTERVAL_LIMIT = 4

# keeps math.exp finite when interpolating between very different gaps
MAX_LOG_SPREAD = 700.0


def log_fraction(value: Fraction) -> float:
    """Natural log of a positive Fraction without float underflow."""
    return math.log(value.numerator) - math.log(value.denominator)


def log_mass(value: mpf) -> float:
    return float(mp.log(value))


def _fit(xs: Sequence[float], ys: Sequence[float]) -> Tuple[float, float, float]:
    """Least-squares slope, intercept and RMS residual."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return float(slope), float(intercept), residual


def exponent_target(tree: MeasureTree) -> float:
    """S - 10/L for a constructed measure, 1 for the dyadic control measure."""
    if tree.solution is None:
        return 1.0
    return float(tree.solution.S) - 10.0 / tree.solution.L


def holder_audit_intervals(
    tree: MeasureTree,
    levels: Optional[Sequence[int]] = None,
    margin: float = DEFAULT_HOLDER_MARGIN,
) -> HolderAudit:
    """
    Regress log mu(J_n) against log |J_n| over the given levels (default: all
    levels >= 1), pooled and per level.

    Raises:
        InsufficientDataError: For fewer than 3 nodes with positive mass
    """
    levels = sorted(levels) if levels is not None else [n for n in sorted(tree.levels) if n >= 1]
    target = exponent_target(tree)

    xs: List[float] = []
    ys: List[float] = []
    per_level: List[LevelHolderFit] = []
    for n in levels:
        points = [
            (log_fraction(node.interval.length), log_mass(node.mass))
            for node in tree.level(n)
            if node.mass > 0 and node.interval.length > 0
        ]
        xs.extend(p[0] for p in points)
        ys.extend(p[1] for p in points)
        level_x = [p[0] for p in points]
        if len(points) >= 2 and max(level_x) > min(level_x):
            slope, _, _ = _fit(level_x, [p[1] for p in points])
            per_level.append(LevelHolderFit(level=n, slope=slope, count=len(points)))

    if len(xs) < MIN_REGRESSION_POINTS:
        raise InsufficientDataError(
            f"interval audit needs at least {MIN_REGRESSION_POINTS} nodes, got {len(xs)}"
        )

    slope, intercept, _ = _fit(xs, ys)
    max_ratio = max(math.exp(y - target * x) for x, y in zip(xs, ys))
    return HolderAudit(
        kind="intervals",
        levels=list(levels),
        exponent_target=target,
        fitted_slope=slope,
        intercept=intercept,
        max_ratio=max_ratio,
        sample_size=len(xs),
        margin=margin,
        per_level=per_level,
    )


class _Cover:
    """Deepest-level nodes with a sorted index for ball queries."""

    def __init__(self, nodes: Sequence[MeasureNode]):
        self.nodes = sorted(nodes, key=lambda node: node.interval.left)
        self.lefts = [node.interval.left for node in self.nodes]
        self.hull = Interval(self.nodes[0].interval.left, max(n.interval.right for n in self.nodes))

    def meeting(self, center: Fraction, radius: Fraction) -> List[MeasureNode]:
        """Nodes whose closure meets the open ball (center - radius, center + radius)."""
        low, high = center - radius, center + radius
        stop = bisect.bisect_left(self.lefts, high)
        start = max(0, bisect.bisect_left(self.lefts, low) - 1)
        return [
            node for node in self.nodes[start:stop] if node.interval.right > low
        ]

    def ball_mass(self, center: Fraction, radius: Fraction) -> mpf:
        return mp.fsum(node.mass for node in self.meeting(center, radius))

    def inside(self, center: Fraction, radius: Fraction) -> bool:
        return self.hull.left <= center - radius and center + radius <= self.hull.right

    def most_met(self, index: int, radius: Fraction) -> int:
        """
        Largest number of nodes met by one open ball of the given radius whose
        center lies in the closure of node `index`.

        A ball meets the p nearest nodes on the left exactly when its center is
        below (right end of the p-th) + radius, and the q nearest on the right
        exactly when it is above (left end of the q-th) - radius; every feasible
        (p, q) pair is tried.
        """
        own = self.nodes[index].interval
        rights: List[Fraction] = []
        j = index - 1
        while j >= 0 and self.nodes[j].interval.right > own.left - radius:
            rights.append(self.nodes[j].interval.right)
            j -= 1
        lefts: List[Fraction] = []
        j = index + 1
        while j < len(self.nodes) and self.lefts[j] < own.right + radius:
            lefts.append(self.lefts[j])
            j += 1

        best = 1
        for p in range(len(rights) + 1):
            for q in range(len(lefts) + 1):
                low, low_open = own.left, False
                if q and lefts[q - 1] - radius >= low:
                    low, low_open = lefts[q - 1] - radius, True
                high, high_open = own.right, False
                if p and rights[p - 1] + radius <= high:
                    high, high_open = rights[p - 1] + radius, True
                if low < high or (low == high and not (low_open or high_open)):
                    best = max(best, p + q + 1)
        return best


class _LevelGaps:
    """Distance from a node to the nearest other node of its level."""

    def __init__(self, tree: MeasureTree):
        self.tree = tree
        self._position: Dict[int, Dict[Tuple[int, ...], int]] = {}

    def __call__(self, node: MeasureNode) -> Optional[Fraction]:
        n = node.level
        nodes = self.tree.level(n)
        if n not in self._position:
            self._position[n] = {other.key: i for i, other in enumerate(nodes)}
        i = self._position[n][node.key]
        gaps = [
            node.interval.distance_to(nodes[j].interval)
            for j in (i - 1, i + 1)
            if 0 <= j < len(nodes)
        ]
        return min(gaps) if gaps else None


def log_uniform_radius(lower: Fraction, upper: Fraction, u: float) -> Fraction:
    """lower * (upper / lower)^u for u in [0, 1), computed relative to lower."""
    spread = u * log_fraction(upper / lower)
    return lower * Fraction(math.exp(min(spread, MAX_LOG_SPREAD)))


def _ball_samples(
    tree: MeasureTree, samples: int, seed: int
) -> Tuple[List[Tuple[str, int, float, float, float]], int, List[str]]:
    """Sampled (case, level, log r, log mu(B), ratio) rows, saturated count, warnings."""
    depth = tree.depth
    cover = _Cover(tree.level(depth))
    if depth < 2 or len(cover.nodes) < 2:
        raise InsufficientDataError(
            f"ball audit needs depth >= 2 and two deepest nodes, got depth {depth}"
        )
    target = exponent_target(tree)
    rng = np.random.default_rng(seed)
    schedule = tree.schedule
    gap = _LevelGaps(tree)

    rows: List[Tuple[str, int, float, float, float]] = []
    saturated = 0
    skipped = 0
    for _ in range(samples):
        node = cover.nodes[int(rng.integers(0, len(cover.nodes)))]
        center = node.interval.midpoint
        if schedule is None:
            top = max(1, depth - CONTROL_RADIUS_OFFSET)
            level = int(rng.integers(1, top + 1))
            radius = Fraction(1, 2**level)
            case = "dyadic"
        else:
            level = int(rng.integers(1, depth))
            upper = gap(tree.ancestor(node, level))
            lower = gap(tree.ancestor(node, level + 1))
            if upper is None or lower is None or lower <= 0:
                skipped += 1
                continue
            radius = upper if lower >= upper else log_uniform_radius(lower, upper, rng.random())
            case = schedule.case_tag(level)
        if not cover.inside(center, radius):
            saturated += 1
            continue
        mass = cover.ball_mass(center, radius)
        log_r = log_fraction(radius)
        ratio = math.exp(log_mass(mass) - target * log_r) if mass > 0 else 0.0
        rows.append((case, level, log_r, log_mass(mass), ratio))

    warnings = []
    if skipped:
        warnings.append(f"{skipped} samples skipped: no neighbour to define a gap")
    if schedule is not None:
        seen = {row[0] for row in rows}
        for case in ("I", "II", "III"):
            if case not in seen:
                warnings.append(f"no ball samples in case {case}")
    logger.debug("ball audit: %d rows, %d saturated, %d skipped", len(rows), saturated, skipped)
    return rows, saturated, warnings


def holder_audit_balls(
    tree: MeasureTree,
    samples: int = 200,
    seed: int = DEFAULT_SEED,
    margin: float = DEFAULT_HOLDER_MARGIN,
) -> HolderAudit:
    """
    Ball masses mu(B(x, r)) for centers in the deepest cover.

    With a schedule, radii are drawn log-uniformly between the gaps g_{n+1} and
    g_n of the center's ancestors, read off the neighbouring nodes of each
    level; the dyadic control tree uses r = 2^-n. Balls reaching outside the
    root hull are counted as saturated and left out of the regression.

    Raises:
        InsufficientDataError: When fewer than 3 usable balls remain
    """
    rows, saturated, warnings = _ball_samples(tree, samples, seed)
    if len(rows) < MIN_REGRESSION_POINTS:
        raise InsufficientDataError(
            f"ball audit needs at least {MIN_REGRESSION_POINTS} usable balls, got {len(rows)}"
        )

    slope, intercept, _ = _fit([r[2] for r in rows], [r[3] for r in rows])
    by_case: Dict[str, List[Tuple[str, int, float, float, float]]] = defaultdict(list)
    for row in rows:
        by_case[row[0]].append(row)

    per_case_slope: Dict[str, float] = {}
    per_case_max: Dict[str, float] = {}
    for case, case_rows in sorted(by_case.items()):
        per_case_max[case] = max(r[4] for r in case_rows)
        log_r = [r[2] for r in case_rows]
        if len(case_rows) >= MIN_REGRESSION_POINTS and max(log_r) > min(log_r):
            per_case_slope[case], _, _ = _fit(log_r, [r[3] for r in case_rows])
        else:
            warnings.append(f"case {case}: too few distinct radii for a slope")

    return HolderAudit(
        kind="balls",
        levels=sorted({r[1] for r in rows}),
        exponent_target=exponent_target(tree),
        fitted_slope=slope,
        intercept=intercept,
        max_ratio=max(r[4] for r in rows),
        sample_size=len(rows),
        margin=margin,
        per_case_slope=per_case_slope,
        per_case_max_ratio=per_case_max,
        excluded=saturated,
        warnings=warnings,
    )


def _scale_samples(tree: MeasureTree, samples: int, seed: int) -> List[Tuple[int, float, float]]:
    """(n, log r, log mu(B)) for balls around deepest-level centers with r = |J_n| of the center."""
    depth = tree.depth
    cover = _Cover(tree.level(depth))
    if depth < 2 or len(cover.nodes) < 2:
        raise InsufficientDataError(
            f"mass distribution fit needs depth >= 2 and two deepest nodes, got depth {depth}"
        )
    top = depth if tree.schedule is not None else max(1, depth - CONTROL_RADIUS_OFFSET)
    rng = np.random.default_rng(seed)
    rows: List[Tuple[int, float, float]] = []
    for _ in range(samples):
        node = cover.nodes[int(rng.integers(0, len(cover.nodes)))]
        level = int(rng.integers(1, top + 1))
        radius = tree.ancestor(node, level).interval.length
        center = node.interval.midpoint
        if radius <= 0 or not cover.inside(center, radius):
            continue
        rows.append((level, log_fraction(radius), log_mass(cover.ball_mass(center, radius))))
    return rows


def mdp_lower_bound(
    tree: MeasureTree, samples: int = 200, seed: int = DEFAULT_SEED
) -> DimensionEstimate:
    """
    Smallest fitted ball exponent over the sampled levels, clamped to [0, 1].

    Each sample takes a deepest-level center x and a level n and measures the
    ball B(x, |J_n(x)|). The balls of one level form a regime; the estimate is
    the smallest per-level slope of log mu(B) against log r. Trees whose
    levels are uniform (the dyadic control) have no per-level spread and fall
    back to the pooled slope.

    Raises:
        InsufficientDataError: With fewer than 3 usable balls
    """
    rows = _scale_samples(tree, samples, seed)
    if len(rows) < MIN_REGRESSION_POINTS:
        raise InsufficientDataError(
            f"mass distribution fit needs at least {MIN_REGRESSION_POINTS} balls, got {len(rows)}"
        )
    by_level: Dict[int, List[Tuple[float, float]]] = defaultdict(list)
    for level, log_r, log_mu in rows:
        by_level[level].append((log_r, log_mu))

    fits: List[Tuple[float, float]] = []
    for level, points in sorted(by_level.items()):
        xs = [p[0] for p in points]
        if len(points) >= MIN_REGRESSION_POINTS and max(xs) > min(xs):
            slope, _, residual = _fit(xs, [p[1] for p in points])
            logger.debug("mass distribution fit: level %d slope %.4f", level, slope)
            fits.append((slope, residual))
    if not fits:
        slope, _, residual = _fit([r[1] for r in rows], [r[2] for r in rows])
        fits.append((slope, residual))

    slope, residual = min(fits)
    return DimensionEstimate(
        method="mdp-fit",
        value=min(max(slope, 0.0), 1.0),
        levels_used=sorted(by_level),
        residual=residual,
        points=sorted((r[1], r[2]) for r in rows),
    )


def covers_from_tree(tree: MeasureTree) -> Dict[int, List[Interval]]:
    """
    Level covers for box counting: the block levels of a constructed measure
    (root included), every level >= 1 of the dyadic control.
    """
    if tree.schedule is None:
        levels = [n for n in sorted(tree.levels) if n >= 1]
    else:
        levels = list(tree.schedule.block_levels(tree.depth))
    return {n: [node.interval for node in tree.levels[n]] for n in levels}


def box_count(covers: Mapping[int, Sequence[Interval]]) -> DimensionEstimate:
    """
    Regress log N_n against -log(mean |J_n|) over the covers, slope clamped to [0, 1].

    Raises:
        InsufficientDataError: With fewer than 3 levels of strictly decreasing mesh
    """
    levels: List[int] = []
    xs: List[float] = []
    ys: List[float] = []
    previous_mesh: Optional[mpf] = None
    for n in sorted(covers):
        intervals = covers[n]
        if not intervals:
            continue
        total = mp.fsum(mpf(i.length.numerator) / i.length.denominator for i in intervals)
        mesh = total / len(intervals)
        if mesh <= 0 or (previous_mesh is not None and mesh >= previous_mesh):
            continue
        previous_mesh = mesh
        levels.append(n)
        xs.append(-log_mass(mesh))
        ys.append(math.log(len(intervals)))

    if len(levels) < MIN_REGRESSION_POINTS:
        raise InsufficientDataError(
            f"box counting needs {MIN_REGRESSION_POINTS} levels of decreasing mesh, "
            f"got {len(levels)}"
        )
    slope, _, residual = _fit(xs, ys)
    return DimensionEstimate(
        method="box-count",
        value=min(max(slope, 0.0), 1.0),
        levels_used=levels,
        residual=residual,
        points=list(zip(xs, ys)),
    )


def four_interval_check(tree: MeasureTree) -> List[Finding]:
    """
    At every materialized window level n_k, no ball of radius |I_{n_k}| centred
    in a level-n_k interval meets more than four level-n_k intervals.

    Every interval of the level is checked with the widest admissible radius,
    the cylinder length of its own word, and the worst center.
    """
    schedule = tree.schedule
    if schedule is None:
        return []
    findings: List[Finding] = []
    for n_k in schedule.window_indices:
        if n_k > tree.depth:
            break
        cover = _Cover(tree.level(n_k))
        worst = 0
        for index, node in enumerate(cover.nodes):
            radius = cylinder(node.word).length
            met = cover.most_met(index, radius)
            worst = max(worst, met)
            if met > FOUR_INTERVAL_LIMIT:
                findings.append(
                    Finding(
                        check="four-interval",
                        subject=f"level {n_k} word {list(node.key)}",
                        observed=str(met),
                        bound=str(FOUR_INTERVAL_LIMIT),
                        detail=f"radius {float(radius):.3e}",
                    )
                )
        logger.debug("four-interval check at level %d: at most %d met", n_k, worst)
    return findings


def cross_validation(
    estimates: Sequence[DimensionEstimate],
    S: float,
    formula: float,
    tolerance: float = DEFAULT_ESTIMATOR_TOLERANCE,
    slack: float = DEFAULT_LOWER_BOUND_SLACK,
) -> CrossValidationReport:
    """Distances of each estimate to S, plus mdp-fit <= box-count + slack."""
    values = {e.method: e.value for e in estimates}
    distances = {method: abs(value - S) for method, value in values.items()}
    consistent = True
    if "mdp-fit" in values and "box-count" in values:
        consistent = values["mdp-fit"] <= values["box-count"] + slack
    return CrossValidationReport(
        S=S,
        formula=formula,
        tolerance=tolerance,
        estimates=values,
        distances=distances,
        within_tolerance={m: d <= tolerance for m, d in distances.items()},
        lower_bound_consistent=consistent,
    )
