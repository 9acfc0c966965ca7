"""
Exact geometry of cylinders and fundamental intervals.

A word (a_1, ..., a_n) followed by a free continuation t >= 1 has value
(t p_n + p_{n-1}) / (t q_n + q_{n-1}), which is monotone in t. The union of the
children with a_{n+1} in [lo, hi] is therefore the single interval swept by
t in [lo, hi + 1); the t = lo end is closed and the t = hi + 1 end is open.
At lo = 1 the t = lo end is the point [w, 1] = [w_1, ..., w_n + 1], which
belongs to a neighbouring cylinder, so that end is open too.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Tuple

from dirilab.src.engine.cf_core import CFWord
from dirilab.src.engine.errors import MembershipError, NoSiblingError, ScheduleError
from dirilab.src.engine.exact import compare_power
from dirilab.src.engine.models import GapReport
from dirilab.src.engine.schedule import CantorSchedule, PositionRole, Schedule

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Interval:
    left: Fraction
    right: Fraction
    left_closed: bool = True
    right_closed: bool = False
    empty: bool = False

    @property
    def length(self) -> Fraction:
        return Fraction(0) if self.empty else self.right - self.left

    @property
    def midpoint(self) -> Fraction:
        return (self.left + self.right) / 2

    def contains_interval(self, other: "Interval") -> bool:
        """Closure-aware containment."""
        if other.empty:
            return True
        if other.left < self.left or other.right > self.right:
            return False
        if other.left == self.left and other.left_closed and not self.left_closed:
            return False
        if other.right == self.right and other.right_closed and not self.right_closed:
            return False
        return True

    def disjoint_from(self, other: "Interval") -> bool:
        """Touching endpoints count as disjoint unless both are closed."""
        if self.empty or other.empty:
            return True
        first, second = (self, other) if self.left <= other.left else (other, self)
        if first.right < second.left:
            return True
        if first.right == second.left:
            return not (first.right_closed and second.left_closed)
        return False

    def distance_to(self, other: "Interval") -> Fraction:
        """Distance between the closures."""
        return max(Fraction(0), other.left - self.right, self.left - other.right)

    def __str__(self) -> str:
        lb = "[" if self.left_closed else "("
        rb = "]" if self.right_closed else ")"
        return f"{lb}{self.left}, {self.right}{rb}"


@dataclass(frozen=True)
class Cylinder:
    word: CFWord
    interval: Interval

    @property
    def length(self) -> Fraction:
        return self.interval.length


def _value_at(word: CFWord, t: int) -> Fraction:
    n = word.n
    return Fraction(t * word.p(n) + word.p(n - 1), t * word.q(n) + word.q(n - 1))


def children_hull(word: CFWord, lo: int, hi: int) -> Interval:
    """Union of the cylinders word + (a,) for a in [lo, hi]."""
    if lo > hi:
        return Interval(Fraction(0), Fraction(0), empty=True)
    near = _value_at(word, lo)
    far = _value_at(word, hi + 1)
    near_closed = lo > 1
    if word.n % 2 == 0:
        return Interval(far, near, left_closed=False, right_closed=near_closed)
    return Interval(near, far, left_closed=near_closed, right_closed=False)


def cylinder(word: CFWord) -> Cylinder:
    """
    Basic cylinder I_n of a word.

    Endpoints are p_n/q_n and (p_n + p_{n-1})/(q_n + q_{n-1}); even n gives
    [p_n/q_n, ...), odd n gives (..., p_n/q_n]. p_n/q_n is left out when a_n = 1.
    The empty word gives [0, 1).
    """
    if word.n == 0:
        return Cylinder(word, Interval(Fraction(0), Fraction(1), True, False))
    a_n = word.a(word.n)
    return Cylinder(word, children_hull(word.prefix(word.n - 1), a_n, a_n))


def child_layout(word: CFWord, a_range: Tuple[int, int]) -> List[Cylinder]:
    """Children word + (a,) for a in a_range, ordered left to right."""
    lo, hi = a_range
    if lo < 1 or lo > hi:
        raise ScheduleError(f"a_range must be a nonempty range of positive integers, got {a_range}")
    children = [cylinder(word.extend(a)) for a in range(lo, hi + 1)]
    return sorted(children, key=lambda c: c.interval.left)


def fundamental_interval(word: CFWord, schedule: Schedule) -> Interval:
    """
    J_n: hull of the admissible children of a word in D_n.

    Raises:
        MembershipError: If the word is not admissible for the schedule
    """
    if not schedule.contains(word):
        raise MembershipError(f"word {word} is not admissible for the schedule")
    lo, hi = schedule.children_range(word)
    return children_hull(word, lo, hi)


@dataclass(frozen=True)
class LengthBracket:
    """
    Bounds lower_scale / base^exponent <= |J| <= upper_scale / base^exponent.

    The exponent may be irrational-valued in effect (2 + tau), so membership
    is decided by exact power comparison.
    """

    case_tag: str
    lower_scale: Fraction
    upper_scale: Fraction
    base: int
    exponent: Fraction

    def contains(self, length: Fraction) -> bool:
        if length <= 0:
            return False
        above = compare_power(self.lower_scale / length, self.base, self.exponent) <= 0
        below = compare_power(self.upper_scale / length, self.base, self.exponent) >= 0
        return above and below

    def describe(self) -> str:
        return (
            f"[{self.lower_scale}/{self.base}^({self.exponent}), "
            f"{self.upper_scale}/{self.base}^({self.exponent})]"
        )


def length_bracket(word: CFWord, schedule: CantorSchedule) -> List[LengthBracket]:
    """
    Brackets that |J_n| must satisfy: the case bracket and, at n = n_k, the
    bracket in terms of q_{n-1}.
    """
    n = word.n
    q_n = word.q(n)
    tag = schedule.case_tag(n)
    if tag == "I":
        brackets = [LengthBracket("I", Fraction(1, 6), Fraction(1), q_n, Fraction(2))]
    elif tag == "II":
        brackets = [LengthBracket("II", Fraction(1, 60), Fraction(1, 16), q_n, Fraction(2))]
    else:
        brackets = [LengthBracket("III", Fraction(2, 3), Fraction(4), q_n, 2 + schedule.tau)]

    role, _ = schedule.position_role(n)
    if n >= 1 and role is PositionRole.WINDOW:
        brackets.append(
            LengthBracket(
                "window", Fraction(2, 3), Fraction(16), word.q(n - 1), 2 + 2 * schedule.tau
            )
        )
    return brackets


def _nearest_extension(
    candidate: CFWord, depth: int, target: Interval, schedule: Schedule
) -> Optional[CFWord]:
    while candidate.n < depth:
        try:
            lo, hi = schedule.children_range(candidate)
        except ScheduleError:
            return None
        if lo == hi:
            candidate = candidate.extend(lo)
            continue
        options = [candidate.extend(lo), candidate.extend(hi)]
        candidate = min(options, key=lambda w: cylinder(w).interval.distance_to(target))
    return candidate


def neighbour_words(word: CFWord, schedule: Schedule) -> List[CFWord]:
    """
    Same-order admissible words adjacent to `word`.

    Quotient a_n is moved by +-1 within its range. When position n admits a
    single quotient the search climbs to the nearest position that does, then
    re-extends towards the original interval.
    """
    target = fundamental_interval(word, schedule)
    neighbours: List[CFWord] = []
    for step in (-1, 1):
        j = word.n
        while j >= 1:
            parent = word.prefix(j - 1)
            lo, hi = schedule.children_range(parent)
            if lo < hi:
                break
            j -= 1
        if j < 1:
            continue
        moved = word.a(j) + step
        if not lo <= moved <= hi:
            continue
        found = _nearest_extension(parent.extend(moved), word.n, target, schedule)
        if found is not None and schedule.contains(found):
            neighbours.append(found)
    return neighbours


def gap_lower_bound(case_tag: str, length: Fraction, M: int) -> Fraction:
    if case_tag == "I":
        return length / (2 * M)
    if case_tag == "II":
        return Fraction(4, 3) * length
    return length / 3


def gap_exact(word: CFWord, schedule: Schedule) -> GapReport:
    """
    Exact gaps between J_n and its neighbouring same-order fundamental intervals.

    Raises:
        MembershipError: If the word is not admissible
        NoSiblingError: If no neighbour exists on either side
    """
    target = fundamental_interval(word, schedule)
    left_gap: Optional[Fraction] = None
    right_gap: Optional[Fraction] = None
    for other_word in neighbour_words(word, schedule):
        lo, hi = schedule.children_range(other_word)
        other = children_hull(other_word, lo, hi)
        gap = target.distance_to(other)
        if other.right <= target.left:
            left_gap = gap if left_gap is None else min(left_gap, gap)
        else:
            right_gap = gap if right_gap is None else min(right_gap, gap)

    existing = [g for g in (left_gap, right_gap) if g is not None]
    if not existing:
        raise NoSiblingError(f"word {word} has no same-order neighbour")

    tag = schedule.case_tag(word.n)
    length = target.length
    min_gap = min(existing)
    return GapReport(
        word=word.quotients,
        case_tag=tag,
        length=length,
        left_gap=left_gap,
        right_gap=right_gap,
        min_gap=min_gap,
        case_lower_bound=gap_lower_bound(tag, length, schedule.M),
        ratio_to_length=min_gap / length,
    )


def pairwise_disjoint(intervals: Iterable[Interval]) -> List[Tuple[Interval, Interval]]:
    """Overlapping pairs among intervals (checked after sorting by left end)."""
    ordered = sorted(intervals, key=lambda i: (i.left, i.right))
    return [(a, b) for a, b in zip(ordered, ordered[1:]) if not a.disjoint_from(b)]
