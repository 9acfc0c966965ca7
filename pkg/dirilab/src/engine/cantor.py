"""
Cantor subsets E_M and E*_M: schedule factories, admissibility, level
enumeration in spatial order, seeded sampling and per-window witnesses.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from dirilab.src.config import DEFAULT_WINDOW_BLOCK_CAP
from dirilab.src.engine.cf_core import CFWord
from dirilab.src.engine.errors import CombinatorialExplosionError, InvalidParameterError
from dirilab.src.engine.exact import (
    Number,
    as_fraction,
    at_least_scaled_power,
    at_most_scaled_power,
)
from dirilab.src.engine.geometry import Interval, children_hull, cylinder
from dirilab.src.engine.models import SandwichReport, WindowWitness
from dirilab.src.engine.schedule import (
    BaseWordPolicy,
    CantorSchedule,
    GeneralSchedule,
    PositionRole,
    Schedule,
)

logger = logging.getLogger(__name__)


def make_schedule(
    M: int, L: int, window_blocks: Sequence[int], tau: Number = 1
) -> CantorSchedule:
    """
    Build the E_M schedule n_0 = 0, n_{k+1} = n_k + m_{k+1} L + 2.

    Raises:
        InvalidParameterError: For M < 2, L < 2, empty or decreasing blocks, tau < 0
    """
    if M < 2:
        raise InvalidParameterError(f"M must be >= 2, got {M}")
    if L < 2:
        raise InvalidParameterError(f"L must be >= 2, got {L}")
    blocks = [int(m) for m in window_blocks]
    if not blocks:
        raise InvalidParameterError("window_blocks must be nonempty")
    if any(m < 1 for m in blocks):
        raise InvalidParameterError(f"window blocks must be >= 1, got {blocks}")
    if any(b < a for a, b in zip(blocks, blocks[1:])):
        raise InvalidParameterError(f"window blocks must be non-decreasing, got {blocks}")
    tau = as_fraction(tau)
    if tau < 0:
        raise InvalidParameterError(f"tau must be >= 0, got {tau}")
    return CantorSchedule(M=M, L=L, tau=tau, window_blocks=tuple(blocks))


def default_window_blocks(count: int, cap: int = DEFAULT_WINDOW_BLOCK_CAP) -> List[int]:
    """m_k = 2^k for k = 1..count, capped."""
    return [min(2**k, cap) for k in range(1, count + 1)]


def make_general_schedule(
    Q_seq: Sequence[int],
    delta: Number,
    epsilon: Number,
    M: int,
    tau: Number,
    base_word_policy: BaseWordPolicy = "enumerated",
    base_quotient: int = 1,
) -> GeneralSchedule:
    """Build the E*_M schedule; window indices are located on construction."""
    return GeneralSchedule(
        Q_seq=tuple(Q_seq),
        delta=as_fraction(delta),
        epsilon=as_fraction(epsilon),
        M=M,
        tau=as_fraction(tau),
        base_word_policy=base_word_policy,
        base_quotient=base_quotient,
    )


def schedule_from_dict(data: Dict[str, Any]) -> Schedule:
    """Inverse of Schedule.to_dict (derived fields are recomputed)."""
    kind = data.get("kind", "cantor")
    if kind == "cantor":
        return make_schedule(
            M=int(data["M"]),
            L=int(data["L"]),
            window_blocks=data["window_blocks"],
            tau=data.get("tau", 1),
        )
    if kind == "general":
        return make_general_schedule(
            Q_seq=[int(Q) for Q in data["Q_seq"]],
            delta=data["delta"],
            epsilon=data["epsilon"],
            M=int(data["M"]),
            tau=data.get("tau", 1),
            base_word_policy=data.get("base_word_policy", "enumerated"),
            base_quotient=int(data.get("base_quotient", 1)),
        )
    raise InvalidParameterError(f"unknown schedule kind {kind!r}")


def is_in_Dn(word: CFWord, schedule: Schedule) -> bool:
    return schedule.contains(word)


@dataclass(frozen=True)
class LevelEntry:
    word: CFWord
    interval: Interval
    cylinder: Interval
    case_tag: str


@dataclass(frozen=True)
class LevelSet:
    n: int
    entries: Tuple[LevelEntry, ...]
    count: Optional[int]
    complete: bool

    @property
    def intervals(self) -> List[Interval]:
        return [e.interval for e in self.entries]


def _spatial_quotients(word: CFWord, lo: int, hi: int) -> range:
    # even-length words place larger quotients further left
    if word.n % 2 == 0:
        return range(hi, lo - 1, -1)
    return range(lo, hi + 1)


def _entry(word: CFWord, schedule: Schedule) -> LevelEntry:
    lo, hi = schedule.children_range(word)
    return LevelEntry(
        word=word,
        interval=children_hull(word, lo, hi),
        cylinder=cylinder(word).interval,
        case_tag=schedule.case_tag(word.n),
    )


def iter_level(schedule: Schedule, n: int, root: Optional[CFWord] = None) -> Iterator[LevelEntry]:
    """Stream the level-n words below `root` (default: all of D_n) left to right."""
    word = root if root is not None else CFWord(())
    if word.n == n:
        yield _entry(word, schedule)
        return
    lo, hi = schedule.children_range(word)
    for a in _spatial_quotients(word, lo, hi):
        yield from iter_level(schedule, n, word.extend(a))


def count_level(schedule: Schedule, n: int, budget: Optional[int] = None) -> Optional[int]:
    """Exact |D_n|, or None once the count exceeds the budget."""

    def windows_ahead(start: int) -> bool:
        return any(
            schedule.position_role(j)[0] is PositionRole.WINDOW for j in range(start, n + 1)
        )

    def count(word: CFWord, limit: Optional[int]) -> Optional[int]:
        if word.n == n:
            return 1
        if not windows_ahead(word.n + 1):
            total = 1
            cursor = word
            for _ in range(word.n, n):
                lo, hi = schedule.children_range(cursor)
                total *= hi - lo + 1
                cursor = cursor.extend(lo)
                if limit is not None and total > limit:
                    return None
            return total
        lo, hi = schedule.children_range(word)
        total = 0
        for a in range(lo, hi + 1):
            remaining = None if limit is None else limit - total
            sub = count(word.extend(a), remaining)
            if sub is None:
                return None
            total += sub
            if limit is not None and total > limit:
                return None
        return total

    return count(CFWord(()), budget)


def enumerate_level(
    schedule: Schedule, n: int, budget: int, exhaustive: bool = False
) -> LevelSet:
    """
    Up to `budget` level-n entries in spatial order.

    Raises:
        InvalidParameterError: If n < 1
        CombinatorialExplosionError: If exhaustive and |D_n| exceeds the budget
    """
    if n < 1:
        raise InvalidParameterError(f"level must be >= 1, got {n}")
    count = count_level(schedule, n, budget)
    if exhaustive and count is None:
        raise CombinatorialExplosionError(f"level {n} has more than {budget} words")

    entries: List[LevelEntry] = []
    for entry in iter_level(schedule, n):
        if len(entries) >= budget:
            break
        entries.append(entry)
    complete = count is not None and len(entries) == count
    logger.debug("level %d: %d entries (count=%s)", n, len(entries), count)
    return LevelSet(n=n, entries=tuple(entries), count=count, complete=complete)


def sample_point(schedule: Schedule, depth: int, seed: int) -> CFWord:
    """Word of D_depth drawn uniformly branch by branch; deterministic per seed."""
    if depth < 1:
        raise InvalidParameterError(f"depth must be >= 1, got {depth}")
    rng = np.random.default_rng(seed)
    word = CFWord(())
    for _ in range(depth):
        lo, hi = schedule.children_range(word)
        word = word.extend(int(rng.integers(lo, hi + 1)))
    return word


def window_witnesses(word: CFWord, schedule: CantorSchedule) -> List[WindowWitness]:
    """
    For each window inside the word: the G witness a_{n_k-1} a_{n_k} >= q^tau and
    the K avoidance a_{n_k} <= q^tau / 2, with q = q_{n_k - 1}.
    """
    witnesses = []
    for k in schedule.windows_within(word.n):
        n_k = schedule.window_indices[k - 1]
        forced, window = word.a(n_k - 1), word.a(n_k)
        q_before = word.q(n_k - 1)
        witnesses.append(
            WindowWitness(
                k=k,
                index=n_k,
                forced_quotient=forced,
                window_quotient=window,
                q_before=q_before,
                g_witness=at_least_scaled_power(forced * window, 1, q_before, schedule.tau),
                k_avoidance=at_most_scaled_power(window, Fraction(1, 2), q_before, schedule.tau),
            )
        )
    return witnesses


def sandwich_report(word: CFWord, schedule: GeneralSchedule) -> List[SandwichReport]:
    """Per-window check of q_{n_k-2} <= Q_k^(1-delta) <= 2M q_{n_k-2} on a word."""
    exponent = 1 - schedule.delta
    reports = []
    for k, (Q, n_k) in enumerate(zip(schedule.Q_seq, schedule.window_indices), start=1):
        if n_k - 2 > word.n:
            break
        q_anchor = word.q(n_k - 2)
        reports.append(
            SandwichReport(
                k=k,
                Q=Q,
                n_k=n_k,
                q_anchor=q_anchor,
                lower_ok=at_most_scaled_power(q_anchor, 1, Q, exponent),
                upper_ok=at_least_scaled_power(2 * schedule.M * q_anchor, 1, Q, exponent),
            )
        )
    return reports

