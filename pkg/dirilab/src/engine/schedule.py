"""
Schedules decide, position by position, which partial quotients a Cantor
construction admits.

Positions fall into three roles relative to the window indices n_1 < n_2 < ...:
free positions take any quotient of the free range, position n_k - 1 holds a
single forced quotient and position n_k takes a window range that depends on
q_{n_k - 1} of the word built so far.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Literal, Optional, Tuple

from dirilab.src.engine.cf_core import CFWord
from dirilab.src.engine.errors import (
    InvalidParameterError,
    SandwichUnsatisfiableError,
    ScheduleError,
)
from dirilab.src.engine.exact import (
    as_fraction,
    at_least_scaled_power,
    at_most_scaled_power,
    ceil_scaled_power,
    floor_scaled_power,
)
from dirilab.src.engine.models.core import format_rational

logger = logging.getLogger(__name__)

CANTOR_FORCED_QUOTIENT = 4

CASE_BY_ROLE = {"free": "I", "forced": "II", "window": "III"}


class PositionRole(str, Enum):
    FREE = "free"
    FORCED = "forced"
    WINDOW = "window"


class Schedule(ABC):
    """Common position logic shared by both constructions."""

    M: int
    tau: Fraction

    @property
    @abstractmethod
    def window_indices(self) -> Tuple[int, ...]:
        """Derived n_1 < n_2 < ... (n_0 = 0 is implicit)."""

    @abstractmethod
    def forced_quotient(self, k: int) -> int:
        """Quotient at position n_k - 1."""

    @abstractmethod
    def window_range(self, k: int, q_before: int) -> Tuple[int, int]:
        """Integer range at position n_k given q_{n_k - 1}; may be empty (lo > hi)."""

    @abstractmethod
    def free_range(self) -> Tuple[int, int]:
        """Integer range at free positions."""

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready description."""

    def position_role(self, j: int) -> Tuple[PositionRole, Optional[int]]:
        """Role of position j (1-based) and the window number it belongs to."""
        for k, n_k in enumerate(self.window_indices, start=1):
            if j == n_k - 1:
                return PositionRole.FORCED, k
            if j == n_k:
                return PositionRole.WINDOW, k
            if j < n_k:
                break
        return PositionRole.FREE, None

    def case_tag(self, n: int) -> str:
        """Length/gap case of a level-n fundamental interval (role of position n + 1)."""
        role, _ = self.position_role(n + 1)
        return CASE_BY_ROLE[role.value]

    def children_range(self, word: CFWord) -> Tuple[int, int]:
        """
        Admissible quotients at position len(word) + 1.

        Raises:
            ScheduleError: If the range is empty
        """
        role, k = self.position_role(word.n + 1)
        if role is PositionRole.FREE:
            lo, hi = self.free_range()
        elif role is PositionRole.FORCED:
            lo = hi = self.forced_quotient(k)
        else:
            lo, hi = self.window_range(k, word.q(word.n))
        if lo > hi:
            raise ScheduleError(
                f"empty quotient range at position {word.n + 1} after {word} "
                f"(q={word.q(word.n)}, window {k})"
            )
        return lo, hi

    def contains(self, word: CFWord) -> bool:
        """True iff every quotient of the word lies in its admissible range."""
        for j in range(1, word.n + 1):
            try:
                lo, hi = self.children_range(word.prefix(j - 1))
            except ScheduleError:
                return False
            if not lo <= word.a(j) <= hi:
                return False
        return True

    def windows_within(self, n: int) -> Tuple[int, ...]:
        """Window numbers k with n_k <= n."""
        return tuple(k for k, n_k in enumerate(self.window_indices, start=1) if n_k <= n)


@dataclass(frozen=True)
class CantorSchedule(Schedule):
    """
    Schedule of E_M: n_0 = 0, n_{k+1} = n_k + m_{k+1} L + 2.

    Windows force a_{n_k - 1} = 4 and a_{n_k} in [q^tau / 4, q^tau / 2] with
    q = q_{n_k - 1}; every other quotient lies in [1, M].
    """

    M: int
    L: int
    tau: Fraction
    window_blocks: Tuple[int, ...]
    _windows: Tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "tau", as_fraction(self.tau))
        object.__setattr__(self, "window_blocks", tuple(int(m) for m in self.window_blocks))
        n_k, windows = 0, []
        for m in self.window_blocks:
            n_k = n_k + m * self.L + 2
            windows.append(n_k)
        object.__setattr__(self, "_windows", tuple(windows))

    @property
    def window_indices(self) -> Tuple[int, ...]:
        return self._windows

    def forced_quotient(self, k: int) -> int:
        return CANTOR_FORCED_QUOTIENT

    def window_range(self, k: int, q_before: int) -> Tuple[int, int]:
        lo = ceil_scaled_power(Fraction(1, 4), q_before, self.tau)
        hi = floor_scaled_power(Fraction(1, 2), q_before, self.tau)
        return max(lo, 1), hi

    def free_range(self) -> Tuple[int, int]:
        return 1, self.M

    def block_levels(self, depth: int) -> Tuple[int, ...]:
        """
        Levels 0..depth that complete a block of L free quotients or place a
        window quotient. Past the last window the free blocks run on.
        """
        levels, start = [0], 0
        for n_k, m_k in zip(self._windows, self.window_blocks):
            levels.extend(start + i * self.L for i in range(1, m_k + 1))
            levels.append(n_k)
            start = n_k
        n = start + self.L
        while n <= depth:
            levels.append(n)
            n += self.L
        return tuple(n for n in levels if n <= depth)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": "cantor",
            "M": self.M,
            "L": self.L,
            "tau": format_rational(self.tau),
            "window_blocks": list(self.window_blocks),
            "window_indices": list(self._windows),
        }


BaseWordPolicy = Literal["fixed", "enumerated"]


@dataclass(frozen=True)
class GeneralSchedule(Schedule):
    """
    Schedule of E*_M for a general approximating function.

    For each Q_k the window index n_k is located along a reference word so that
    q_{n_k - 2} <= Q_k^(1 - delta) <= 2M q_{n_k - 2}; the forced quotient is
    round(Q_k^delta / 4) and the window range is [q^(tau - eps) / 2, q^(tau - eps)].
    """

    Q_seq: Tuple[int, ...]
    delta: Fraction
    epsilon: Fraction
    M: int
    tau: Fraction
    base_word_policy: BaseWordPolicy = "enumerated"
    base_quotient: int = 1
    _windows: Tuple[int, ...] = field(init=False, repr=False, compare=False)
    _forced: Tuple[int, ...] = field(init=False, repr=False, compare=False)
    _reference: CFWord = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        for name in ("delta", "epsilon", "tau"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        object.__setattr__(self, "Q_seq", tuple(int(Q) for Q in self.Q_seq))
        self._validate()
        self._locate_windows()

    def _validate(self) -> None:
        if self.epsilon <= 0 or self.delta < 3 * self.epsilon:
            raise InvalidParameterError(
                f"need delta >= 3*epsilon > 0, got delta={self.delta}, epsilon={self.epsilon}"
            )
        if self.delta >= 1:
            raise InvalidParameterError(f"delta must be < 1, got {self.delta}")
        if self.M < 2:
            raise InvalidParameterError(f"M must be >= 2, got {self.M}")
        if self.tau < 0:
            raise InvalidParameterError(f"tau must be >= 0, got {self.tau}")
        if not self.Q_seq:
            raise InvalidParameterError("Q_seq must be nonempty")
        if self.Q_seq[0] < 2 or any(b <= a for a, b in zip(self.Q_seq, self.Q_seq[1:])):
            raise InvalidParameterError(
                f"Q_seq must be strictly increasing integers >= 2, got {list(self.Q_seq)}"
            )
        if self.base_word_policy not in ("fixed", "enumerated"):
            raise InvalidParameterError(f"unknown base_word_policy {self.base_word_policy!r}")
        if not 1 <= self.base_quotient <= self.M:
            raise InvalidParameterError(
                f"base_quotient must lie in [1, {self.M}], got {self.base_quotient}"
            )

    def _locate_windows(self) -> None:
        exponent = 1 - self.delta
        word = CFWord(())
        windows, forced = [], []
        for k, Q in enumerate(self.Q_seq, start=1):
            previous = windows[-1] if windows else 0
            while at_most_scaled_power(word.q(word.n), 1, Q, exponent):
                word = word.extend(self.base_quotient)
            m = word.n - 1
            if m < previous or not at_least_scaled_power(2 * self.M * word.q(m), 1, Q, exponent):
                raise SandwichUnsatisfiableError(
                    f"no prefix length satisfies the sandwich for Q_{k}={Q} "
                    f"(largest admissible index {m}, previous window {previous})",
                    q_value=Q,
                )

            nearest = floor_scaled_power(Fraction(1, 4), Q, self.delta, Fraction(1, 2))
            forced_quotient = max(1, nearest)
            word = word.prefix(m).extend(forced_quotient)
            lo, hi = self._window_bounds(word.q(word.n))
            if lo > hi:
                raise ScheduleError(
                    f"empty window range for Q_{k}={Q} at q={word.q(word.n)}"
                )
            word = word.extend(lo)
            windows.append(m + 2)
            forced.append(forced_quotient)
            logger.debug("Q_%d=%d -> n_%d=%d, forced quotient %d", k, Q, k, m + 2, forced_quotient)

        object.__setattr__(self, "_windows", tuple(windows))
        object.__setattr__(self, "_forced", tuple(forced))
        object.__setattr__(self, "_reference", word)

    def _window_bounds(self, q_before: int) -> Tuple[int, int]:
        exponent = self.tau - self.epsilon
        lo = ceil_scaled_power(Fraction(1, 2), q_before, exponent)
        hi = floor_scaled_power(1, q_before, exponent)
        return max(lo, 1), hi

    @property
    def window_indices(self) -> Tuple[int, ...]:
        return self._windows

    @property
    def reference_word(self) -> CFWord:
        return self._reference

    def forced_quotient(self, k: int) -> int:
        return self._forced[k - 1]

    def window_range(self, k: int, q_before: int) -> Tuple[int, int]:
        return self._window_bounds(q_before)

    def free_range(self) -> Tuple[int, int]:
        if self.base_word_policy == "fixed":
            return self.base_quotient, self.base_quotient
        return 1, self.M

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": "general",
            "Q_seq": list(self.Q_seq),
            "delta": format_rational(self.delta),
            "epsilon": format_rational(self.epsilon),
            "M": self.M,
            "tau": format_rational(self.tau),
            "base_word_policy": self.base_word_policy,
            "base_quotient": self.base_quotient,
            "window_indices": list(self._windows),
            "forced_quotients": list(self._forced),
        }
