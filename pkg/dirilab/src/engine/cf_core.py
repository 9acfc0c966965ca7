"""
Exact continued-fraction arithmetic.

Words are finite strings of partial quotients (a_1, ..., a_n) of numbers in
[0, 1). Continuants p_i, q_i are cached on the word with seeds
(p_{-1}, q_{-1}) = (1, 0) and (p_0, q_0) = (0, 1).
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from dirilab.src.engine.errors import (
    DomainError,
    IndexOutOfRangeError,
    TailUndefinedError,
)
from dirilab.src.engine.exact import Number, as_fraction
from dirilab.src.engine.models import ApproximationReport, CasselsReport, Finding

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CFWord:
    """Finite continued-fraction word with cached continuants."""

    quotients: Tuple[int, ...] = ()
    truncated: bool = False
    _p: Tuple[int, ...] = field(init=False, repr=False, compare=False)
    _q: Tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        quotients = tuple(int(a) for a in self.quotients)
        for i, a in enumerate(quotients, start=1):
            if a < 1:
                raise DomainError(f"partial quotient a_{i} must be >= 1, got {a}")
        object.__setattr__(self, "quotients", quotients)

        p_prev, p_cur = 1, 0
        q_prev, q_cur = 0, 1
        ps, qs = [p_cur], [q_cur]
        for a in quotients:
            p_prev, p_cur = p_cur, a * p_cur + p_prev
            q_prev, q_cur = q_cur, a * q_cur + q_prev
            ps.append(p_cur)
            qs.append(q_cur)
        object.__setattr__(self, "_p", tuple(ps))
        object.__setattr__(self, "_q", tuple(qs))

    def __len__(self) -> int:
        return len(self.quotients)

    def __str__(self) -> str:
        return "[" + ",".join(str(a) for a in self.quotients) + "]"

    @property
    def n(self) -> int:
        return len(self.quotients)

    def a(self, i: int) -> int:
        """Partial quotient a_i, 1-based."""
        if not 1 <= i <= self.n:
            raise IndexOutOfRangeError(f"index {i} outside 1..{self.n}")
        return self.quotients[i - 1]

    def p(self, i: int) -> int:
        if i == -1:
            return 1
        if not 0 <= i <= self.n:
            raise IndexOutOfRangeError(f"index {i} outside -1..{self.n}")
        return self._p[i]

    def q(self, i: int) -> int:
        if i == -1:
            return 0
        if not 0 <= i <= self.n:
            raise IndexOutOfRangeError(f"index {i} outside -1..{self.n}")
        return self._q[i]

    @property
    def value(self) -> Fraction:
        return Fraction(self._p[-1], self._q[-1])

    def extend(self, *quotients: int) -> "CFWord":
        return CFWord(self.quotients + tuple(quotients))

    def prefix(self, n: int) -> "CFWord":
        if not 0 <= n <= self.n:
            raise IndexOutOfRangeError(f"prefix length {n} outside 0..{self.n}")
        return CFWord(self.quotients[:n])

    def suffix(self, start: int) -> "CFWord":
        """Word (a_{start+1}, ..., a_n)."""
        if not 0 <= start <= self.n:
            raise IndexOutOfRangeError(f"suffix start {start} outside 0..{self.n}")
        return CFWord(self.quotients[start:])


def _evaluate(quotients: Sequence[int]) -> Fraction:
    value = Fraction(0)
    for a in reversed(quotients):
        value = 1 / (a + value)
    return value


def cf_expand(x: Number, max_depth: Optional[int] = None) -> CFWord:
    """
    Expand x in [0, 1) by the Euclidean algorithm.

    Terminating expansions end with a quotient >= 2. When max_depth cuts the
    expansion short the returned word carries truncated=True.

    Raises:
        DomainError: If x is outside [0, 1) or max_depth < 1
    """
    x = as_fraction(x)
    if not 0 <= x < 1:
        raise DomainError(f"x must lie in [0, 1), got {x}")
    if max_depth is not None and max_depth < 1:
        raise DomainError(f"max_depth must be >= 1, got {max_depth}")

    quotients: List[int] = []
    while x != 0 and (max_depth is None or len(quotients) < max_depth):
        y = 1 / x
        a = math.floor(y)
        quotients.append(a)
        x = y - a
    return CFWord(tuple(quotients), truncated=x != 0)


def convergents(word: CFWord) -> List[Tuple[int, int]]:
    """Pairs (p_i, q_i) for i = 0..n."""
    return [(word.p(i), word.q(i)) for i in range(word.n + 1)]


def word_value(word: CFWord) -> Fraction:
    return word.value


def reversed_value(word: CFWord, n: int) -> Fraction:
    """Value of the reversed prefix [a_n, a_{n-1}, ..., a_1]; equals q_{n-1}/q_n."""
    if not 1 <= n <= word.n:
        raise IndexOutOfRangeError(f"n must lie in 1..{word.n}, got {n}")
    return _evaluate(tuple(reversed(word.quotients[:n])))


def tail_value(word: CFWord, n: int) -> Fraction:
    """Value of the tail [a_{n+1}, a_{n+2}, ...] of the word."""
    if not 0 <= n < word.n:
        raise TailUndefinedError(f"no tail after index {n} in a word of length {word.n}")
    return _evaluate(word.quotients[n:])


def cassels_check(x: Number, n: int) -> CasselsReport:
    """
    Evaluate both sides of (1 + theta_{n+1} phi_n)^{-1} = q_n |q_{n-1} x - p_{n-1}|.

    Raises:
        IndexOutOfRangeError: If n < 1
        TailUndefinedError: If the expansion of x has length <= n
    """
    x = as_fraction(x)
    if n < 1:
        raise IndexOutOfRangeError(f"n must be >= 1, got {n}")
    word = cf_expand(x)
    if word.n <= n:
        raise TailUndefinedError(
            f"expansion of {x} has length {word.n}; theta_{n + 1} needs length > {n}"
        )

    theta = tail_value(word, n)
    phi = Fraction(word.q(n - 1), word.q(n))
    lhs = 1 / (1 + theta * phi)
    rhs = word.q(n) * abs(word.q(n - 1) * x - word.p(n - 1))
    return CasselsReport(
        n=n, theta_next=theta, phi_n=phi, lhs=lhs, rhs=rhs, residual=lhs - rhs
    )


def dirichlet_solve(x: Number, t: Number) -> Tuple[int, int]:
    """
    Find (p, q) with |qx - p| <= 1/t and 1 <= q < t.

    Picks the convergent with q_n < t <= q_{n+1}; when the expansion ends first
    the last convergent hits x exactly.
    """
    x = as_fraction(x)
    t = as_fraction(t)
    if t <= 1:
        raise DomainError(f"t must be > 1, got {t}")

    shift = math.floor(x)
    word = cf_expand(x - shift)
    n = max(i for i in range(word.n + 1) if word.q(i) < t)
    p, q = word.p(n) + shift * word.q(n), word.q(n)
    logger.debug("dirichlet x=%s t=%s -> convergent %d (%d/%d)", x, t, n, p, q)
    return p, q


def legendre_check(x: Number, n: int) -> bool:
    """|q_n x - p_n| < 1/q_n at convergent n of x."""
    x = as_fraction(x)
    word = cf_expand(x)
    if not 0 <= n <= word.n:
        raise IndexOutOfRangeError(f"n must lie in 0..{word.n}, got {n}")
    return abs(word.q(n) * x - word.p(n)) < Fraction(1, word.q(n))


def approximation_bounds(x: Number, n: int) -> ApproximationReport:
    """
    Report 1/(3 a_{n+1} q_n^2) < |x - p_n/q_n| < 1/(a_{n+1} q_n^2) and the exact
    value 1/(q_n (q_{n+1} + T^{n+1}(x) q_n)).
    """
    x = as_fraction(x)
    word = cf_expand(x)
    if n < 0:
        raise IndexOutOfRangeError(f"n must be >= 0, got {n}")
    if word.n <= n + 1:
        raise TailUndefinedError(
            f"expansion of {x} has length {word.n}; bounds at n={n} need length > {n + 1}"
        )

    q_n = word.q(n)
    a_next = word.a(n + 1)
    distance = abs(x - Fraction(word.p(n), q_n))
    identity_value = 1 / (q_n * (word.q(n + 1) + tail_value(word, n + 1) * q_n))
    lower = Fraction(1, 3 * a_next * q_n * q_n)
    upper = Fraction(1, a_next * q_n * q_n)
    return ApproximationReport(
        n=n,
        distance=distance,
        identity_value=identity_value,
        lower_bound=lower,
        upper_bound=upper,
        within_bounds=lower < distance < upper,
    )


def continuant_properties(word: CFWord) -> List[Finding]:
    """
    Check the determinant identity, cylinder length, growth and product bounds
    and the reversed-value identity at every index of the word.
    """
    findings: List[Finding] = []
    subject = str(word)

    def report(check: str, observed: object, bound: object, detail: str = "") -> None:
        findings.append(
            Finding(
                check=check,
                subject=subject,
                observed=str(observed),
                bound=str(bound),
                detail=detail,
            )
        )

    for n in range(1, word.n + 1):
        q_n, q_prev = word.q(n), word.q(n - 1)
        p_n, p_prev = word.p(n), word.p(n - 1)

        det = p_prev * q_n - p_n * q_prev
        if det != (-1) ** n:
            report("determinant", det, (-1) ** n, f"n={n}")

        other = Fraction(p_n + p_prev, q_n + q_prev)
        length = abs(other - Fraction(p_n, q_n))
        expected = Fraction(1, q_n * (q_n + q_prev))
        if length != expected:
            report("cylinder-length", length, expected, f"n={n}")
        if not Fraction(1, 2 * q_n * q_n) <= length <= Fraction(1, q_n * q_n):
            report("cylinder-bracket", length, f"[1/{2 * q_n * q_n}, 1/{q_n * q_n}]", f"n={n}")

        if q_n * q_n < 2 ** (n - 1):
            report("growth", q_n, f"2^({n - 1}/2)", f"n={n}")

        if reversed_value(word, n) != Fraction(q_prev, q_n):
            report("reversed-value", reversed_value(word, n), Fraction(q_prev, q_n), f"n={n}")

    for k in range(1, word.n):
        product = word.q(k) * word.suffix(k).q(word.n - k)
        if not product <= word.q(word.n) <= 2 * product:
            report("product-bound", word.q(word.n), f"[{product}, {2 * product}]", f"split k={k}")

    return findings


@dataclass(frozen=True)
class PeriodicWord:
    """Eventually periodic expansion [preperiod, period, period, ...]."""

    preperiod: Tuple[int, ...]
    period: Tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "preperiod", tuple(int(a) for a in self.preperiod))
        object.__setattr__(self, "period", tuple(int(a) for a in self.period))
        if not self.period:
            raise DomainError("period must be nonempty")
        if any(a < 1 for a in self.preperiod + self.period):
            raise DomainError("partial quotients must be >= 1")

    @classmethod
    def for_sqrt(cls, d: int) -> "PeriodicWord":
        """Expansion of sqrt(d) - floor(sqrt(d)) for a non-square d."""
        root = math.isqrt(d)
        if d < 2 or root * root == d:
            raise DomainError(f"d must be a positive non-square, got {d}")
        m, den, a = 0, 1, root
        period: List[int] = []
        while a != 2 * root:
            m = den * a - m
            den = (d - m * m) // den
            a = (root + m) // den
            period.append(a)
        return cls((), tuple(period))

    def quotient(self, i: int) -> int:
        if i < 1:
            raise IndexOutOfRangeError(f"index must be >= 1, got {i}")
        if i <= len(self.preperiod):
            return self.preperiod[i - 1]
        return self.period[(i - len(self.preperiod) - 1) % len(self.period)]

    def prefix(self, n: int) -> CFWord:
        return CFWord(tuple(self.quotient(i) for i in range(1, n + 1)), truncated=True)
