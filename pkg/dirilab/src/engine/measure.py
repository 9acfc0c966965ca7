"""
Mass distribution on the fundamental intervals of E_M.

Block levels n_k + iL carry the window mass times the product of the block
weights q_L(block)^{-(2+tau)S}; intermediate levels carry the sum of their
descendants; the forced level passes its mass on unchanged and the window
level splits it evenly over the admissible window quotients.

A tree built with a stem word keeps only the stem's ancestors and
descendants. Masses stay those of the full measure, so every level below the
stem sums to mu(stem).
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Literal, Optional, Tuple

from mpmath import mp, mpf

from dirilab.src.config import (
    DEFAULT_CONSISTENCY_TOLERANCE,
    DEFAULT_LEVEL_BUDGET,
    DEFAULT_MASS_TOLERANCE,
    DEFAULT_PRECISION_BITS,
)
from dirilab.src.engine.cantor import count_level
from dirilab.src.engine.cf_core import CFWord
from dirilab.src.engine.errors import (
    CombinatorialExplosionError,
    InvalidParameterError,
    MembershipError,
    MissingSolutionError,
)
from dirilab.src.engine.exact import power_mpf
from dirilab.src.engine.geometry import Interval, children_hull
from dirilab.src.engine.models import Finding, NormalizationReport, PressureSolution
from dirilab.src.engine.models.core import format_rational
from dirilab.src.engine.pressure import pressure_sum
from dirilab.src.engine.schedule import CantorSchedule, PositionRole

logger = logging.getLogger(__name__)

LevelRole = Literal["block-boundary", "window-2", "window-1", "window-0", "intermediate", "dyadic"]

Step3Mode = Literal["actual", "quarter-power"]


@dataclass(frozen=True)
class MeasureNode:
    key: Tuple[int, ...]
    interval: Interval
    mass: mpf
    level_role: LevelRole
    word: Optional[CFWord] = None

    @property
    def level(self) -> int:
        return len(self.key)


@dataclass
class MeasureTree:
    """Materialized levels 0..depth of a measure, each in left-to-right order."""

    levels: Dict[int, List[MeasureNode]]
    schedule: Optional[CantorSchedule] = None
    solution: Optional[PressureSolution] = None
    step3: str = "actual"
    stem: Tuple[int, ...] = ()
    _by_key: Dict[Tuple[int, ...], MeasureNode] = field(init=False, repr=False)
    _children: Dict[Tuple[int, ...], List[MeasureNode]] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self._by_key = {}
        self._children = {}
        for nodes in self.levels.values():
            for node in nodes:
                self._by_key[node.key] = node
                if node.key:
                    self._children.setdefault(node.key[:-1], []).append(node)

    @property
    def depth(self) -> int:
        return max(self.levels)

    @property
    def stem_mass(self) -> mpf:
        return self._by_key[self.stem].mass

    def level(self, n: int) -> List[MeasureNode]:
        if n not in self.levels:
            raise InvalidParameterError(f"level {n} is not materialized (depth {self.depth})")
        return self.levels[n]

    def parent(self, node: MeasureNode) -> Optional[MeasureNode]:
        return self._by_key.get(node.key[:-1]) if node.key else None

    def children(self, node: MeasureNode) -> List[MeasureNode]:
        return self._children.get(node.key, [])

    def ancestor(self, node: MeasureNode, n: int) -> MeasureNode:
        """The level-n node whose interval contains `node`."""
        return self._by_key[node.key[:n]]


def level_role(schedule: CantorSchedule, n: int) -> LevelRole:
    """Role of level n in the mass assignment."""
    if n == 0:
        return "block-boundary"
    role, _ = schedule.position_role(n)
    if role is PositionRole.WINDOW:
        return "window-0"
    if role is PositionRole.FORCED:
        return "window-1"
    if schedule.position_role(n + 1)[0] is PositionRole.FORCED:
        return "window-2"
    start = max((n_k for n_k in schedule.window_indices if n_k <= n), default=0)
    return "block-boundary" if (n - start) % schedule.L == 0 else "intermediate"


class _BlockWeights:
    """Normalized block weights w(prefix) summed over all completions of a partial block."""

    def __init__(self, L: int, M: int, exponent: mpf, normalizer: mpf):
        self.L = L
        self.M = M
        self.exponent = exponent
        self.normalizer = normalizer
        self._cache: Dict[Tuple[int, ...], mpf] = {}

    def __call__(self, prefix: Tuple[int, ...]) -> mpf:
        if prefix in self._cache:
            return self._cache[prefix]
        if len(prefix) == self.L:
            value = mpf(CFWord(prefix).q(self.L)) ** self.exponent / self.normalizer
        else:
            value = mp.fsum(self(prefix + (a,)) for a in range(1, self.M + 1))
        self._cache[prefix] = value
        return value


def assign_measure(
    schedule: CantorSchedule,
    solution: PressureSolution,
    max_level: int,
    budget: int = DEFAULT_LEVEL_BUDGET,
    step3: Step3Mode = "actual",
    precision_bits: int = DEFAULT_PRECISION_BITS,
    stem: Optional[CFWord] = None,
) -> MeasureTree:
    """
    Assign masses to every fundamental interval of levels 0..max_level, or
    only to the ancestors and descendants of `stem` when one is given.

    Raises:
        MissingSolutionError: If the solution was solved for another (L, M, tau)
        MembershipError: If the stem is not admissible
        CombinatorialExplosionError: If level max_level exceeds the budget
    """
    if (solution.L, solution.M, solution.tau) != (schedule.L, schedule.M, schedule.tau):
        raise MissingSolutionError(
            f"solution is for (L={solution.L}, M={solution.M}, tau={solution.tau}); "
            f"schedule needs (L={schedule.L}, M={schedule.M}, tau={schedule.tau})"
        )
    if step3 not in ("actual", "quarter-power"):
        raise InvalidParameterError(f"step3 must be 'actual' or 'quarter-power', got {step3!r}")
    if max_level < 0:
        raise InvalidParameterError(f"max_level must be >= 0, got {max_level}")
    path = stem.quotients if stem is not None else ()
    if len(path) > max_level:
        raise InvalidParameterError(f"stem {stem} is longer than max_level {max_level}")
    if stem is not None and not schedule.contains(stem):
        raise MembershipError(f"stem {stem} is not admissible")
    if not path and max_level > 0 and count_level(schedule, max_level, budget) is None:
        raise CombinatorialExplosionError(f"level {max_level} has more than {budget} words")

    levels: Dict[int, List[MeasureNode]] = {n: [] for n in range(max_level + 1)}
    roles = {n: level_role(schedule, n) for n in range(max_level + 1)}

    with mp.workprec(precision_bits):
        tau = mpf(schedule.tau.numerator) / schedule.tau.denominator
        exponent = -(2 + tau) * solution.S
        normalizer = pressure_sum(schedule.L, schedule.M, schedule.tau, solution.S, precision_bits)
        weights = _BlockWeights(schedule.L, schedule.M, exponent, normalizer)

        def build(word: CFWord, mass: mpf, boundary: mpf, block: Tuple[int, ...]) -> None:
            lo, hi = schedule.children_range(word)
            levels[word.n].append(
                MeasureNode(
                    key=word.quotients,
                    interval=children_hull(word, lo, hi),
                    mass=mass,
                    level_role=roles[word.n],
                    word=word,
                )
            )
            if word.n == max_level:
                if len(levels[max_level]) > budget:
                    raise CombinatorialExplosionError(
                        f"level {max_level} has more than {budget} words below {list(path)}"
                    )
                return
            role, _ = schedule.position_role(word.n + 1)
            if word.n < len(path):
                quotients = range(path[word.n], path[word.n] + 1)
            elif word.n % 2 == 0:
                quotients = range(hi, lo - 1, -1)
            else:
                quotients = range(lo, hi + 1)
            for a in quotients:
                child = word.extend(a)
                if role is PositionRole.FREE:
                    partial = block + (a,)
                    child_mass = boundary * weights(partial)
                    if len(partial) == schedule.L:
                        build(child, child_mass, child_mass, ())
                    else:
                        build(child, child_mass, boundary, partial)
                elif role is PositionRole.FORCED:
                    build(child, mass, mass, ())
                else:
                    if step3 == "actual":
                        divisor = mpf(hi - lo + 1)
                    else:
                        divisor = power_mpf(word.q(word.n), schedule.tau) / 4
                    child_mass = mass / divisor
                    build(child, child_mass, child_mass, ())

        build(CFWord(()), mpf(1), mpf(1), ())

    logger.debug(
        "measure tree to level %d: %d nodes at the deepest level",
        max_level,
        len(levels[max_level]),
    )
    return MeasureTree(
        levels=levels, schedule=schedule, solution=solution, step3=step3, stem=path
    )


def lebesgue_tree(depth: int) -> MeasureTree:
    """Dyadic intervals of [0, 1) with mass equal to length."""
    if depth < 0:
        raise InvalidParameterError(f"depth must be >= 0, got {depth}")
    levels: Dict[int, List[MeasureNode]] = {}
    for n in range(depth + 1):
        size = Fraction(1, 2**n)
        levels[n] = [
            MeasureNode(
                key=tuple(int(bit) for bit in format(i, f"0{n}b")) if n else (),
                interval=Interval(i * size, (i + 1) * size),
                mass=mpf(1) / 2**n,
                level_role="dyadic",
            )
            for i in range(2**n)
        ]
    return MeasureTree(levels=levels)


def normalization_audit(
    tree: MeasureTree,
    level: int,
    mass_tol: float = DEFAULT_MASS_TOLERANCE,
    consistency_tol: float = DEFAULT_CONSISTENCY_TOLERANCE,
) -> NormalizationReport:
    """
    Total mass of a level against mu(stem) (1 for a full tree) and
    parent/children agreement against the level above.

    Raises:
        InvalidParameterError: For a level above the stem
    """
    if level < len(tree.stem):
        raise InvalidParameterError(f"level {level} lies above the stem {list(tree.stem)}")
    nodes = tree.level(level)
    findings: List[Finding] = []
    total = mp.fsum(node.mass for node in nodes)
    expected = tree.stem_mass
    deviation = abs(total - expected)
    if deviation > mass_tol:
        findings.append(
            Finding(
                check="total-mass",
                subject=f"level {level}",
                observed=mp.nstr(total, 20),
                bound=f"{mp.nstr(expected, 20)} +- {mass_tol}",
            )
        )

    worst = mpf(0)
    if level > len(tree.stem):
        for parent in tree.level(level - 1):
            children = tree.children(parent)
            gap = abs(parent.mass - mp.fsum(child.mass for child in children))
            worst = max(worst, gap)
            if gap > consistency_tol:
                findings.append(
                    Finding(
                        check="parent-consistency",
                        subject=f"level {level - 1} node {list(parent.key)}",
                        observed=mp.nstr(gap, 10),
                        bound=str(consistency_tol),
                    )
                )

    return NormalizationReport(
        level=level,
        node_count=len(nodes),
        total_mass=total,
        deviation=deviation,
        max_parent_deviation=worst,
        findings=findings,
    )


def measure_rows(tree: MeasureTree) -> List[Dict[str, str]]:
    """Flat CSV rows (level, word, left, right, mass, role) in level then spatial order."""
    rows = []
    for n in sorted(tree.levels):
        for node in tree.levels[n]:
            rows.append(
                {
                    "level": str(n),
                    "word": " ".join(str(a) for a in node.key),
                    "left": format_rational(node.interval.left),
                    "right": format_rational(node.interval.right),
                    "mass": mp.nstr(node.mass, 20),
                    "role": node.level_role,
                }
            )
    return rows
