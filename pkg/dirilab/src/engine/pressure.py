"""
Pressure equation sum over (a_1..a_L) in [1, M]^L of q_L^{-(2 + tau) s} = 1.

Denominators q_L are grouped into a multiset first, so a sum costs one power
per distinct q_L rather than one per word.
"""

import logging
from collections import Counter
from functools import lru_cache
from typing import Callable, Dict, Optional, Sequence, Tuple

from mpmath import mp, mpf

from dirilab.src.config import (
    DEFAULT_PRECISION_BITS,
    DEFAULT_SOLVER_TOLERANCE,
    DEFAULT_TERM_BUDGET,
)
from dirilab.src.engine.errors import (
    CombinatorialExplosionError,
    DomainError,
    InvalidParameterError,
    NoRootError,
)
from dirilab.src.engine.exact import Number, as_fraction
from dirilab.src.engine.models import PressureSolution, TrendReport, TrendRow

logger = logging.getLogger(__name__)

MAX_BRACKET_DOUBLINGS = 64


def _check_parameters(L: int, M: int, term_budget: int) -> None:
    if L < 2:
        raise InvalidParameterError(
            f"L must be >= 2, got {L} (with L = 1 the a_1 = 1 term alone reaches 1)"
        )
    if M < 2:
        raise InvalidParameterError(f"M must be >= 2, got {M}")
    if M**L > term_budget:
        raise CombinatorialExplosionError(
            f"M^L = {M}^{L} terms exceeds the term budget {term_budget}"
        )


def _to_mpf(value: Number) -> mpf:
    if isinstance(value, mpf):
        return value
    value = as_fraction(value)
    return mpf(value.numerator) / value.denominator


@lru_cache(maxsize=64)
def denominator_multiset(L: int, M: int) -> Tuple[Tuple[int, int], ...]:
    """Sorted (q_L, multiplicity) pairs over all words in [1, M]^L."""
    states: Dict[Tuple[int, int], int] = {(0, 1): 1}
    for _ in range(L):
        grown: Counter = Counter()
        for (q_prev, q_cur), count in states.items():
            for a in range(1, M + 1):
                grown[(q_cur, a * q_cur + q_prev)] += count
        states = grown
    totals: Counter = Counter()
    for (_, q_last), count in states.items():
        totals[q_last] += count
    return tuple(sorted(totals.items()))


def pressure_sum(
    L: int,
    M: int,
    tau: Number,
    s: Number,
    precision_bits: int = DEFAULT_PRECISION_BITS,
    term_budget: int = DEFAULT_TERM_BUDGET,
) -> mpf:
    """
    Sum of (1 / q_L^(2 + tau))^s over [1, M]^L with compensated summation.

    Raises:
        InvalidParameterError: For L < 2 or M < 2
        CombinatorialExplosionError: If M^L exceeds term_budget
        DomainError: If s < 0
    """
    _check_parameters(L, M, term_budget)
    tau = as_fraction(tau)
    with mp.workprec(precision_bits):
        s_mp = _to_mpf(s)
        if s_mp < 0:
            raise DomainError(f"s must be >= 0, got {s}")
        exponent = -(2 + mpf(tau.numerator) / tau.denominator) * s_mp
        return mp.fsum(count * mpf(q) ** exponent for q, count in denominator_multiset(L, M))


def solve_S(
    L: int,
    M: int,
    tau: Number,
    tol: float = DEFAULT_SOLVER_TOLERANCE,
    precision_bits: int = DEFAULT_PRECISION_BITS,
    term_budget: int = DEFAULT_TERM_BUDGET,
) -> PressureSolution:
    """
    Root of the pressure equation by bisection on [0, 1], widening hi if needed.

    Raises:
        InvalidParameterError: For L < 2 or M < 2
        NoRootError: If the sum at s = 0 does not exceed 1
    """
    _check_parameters(L, M, term_budget)
    tau = as_fraction(tau)
    evaluations = 0

    def excess(s: mpf) -> mpf:
        nonlocal evaluations
        evaluations += 1
        return pressure_sum(L, M, tau, s, precision_bits, term_budget) - 1

    with mp.workprec(precision_bits):
        lo, hi = mpf(0), mpf(1)
        if excess(lo) <= 0:
            raise NoRootError(f"pressure sum at s=0 is <= 1 for L={L}, M={M}")
        doublings = 0
        while excess(hi) > 0:
            lo, hi = hi, 2 * hi
            doublings += 1
            if doublings > MAX_BRACKET_DOUBLINGS:
                raise NoRootError(f"no sign change below s={hi} for L={L}, M={M}")

        # bisection halves the bracket; precision_bits halvings exhaust the mantissa
        S, residual = (lo + hi) / 2, mpf(1)
        for _ in range(precision_bits + 8):
            S = (lo + hi) / 2
            value = excess(S)
            residual = abs(value)
            if residual <= tol:
                break
            if value > 0:
                lo = S
            else:
                hi = S

    logger.debug(
        "S(L=%d, M=%d, tau=%s) = %s after %d evaluations", L, M, tau, mp.nstr(S, 15), evaluations
    )
    return PressureSolution(
        L=L,
        M=M,
        tau=tau,
        S=S,
        bracket=(lo, hi),
        residual=residual,
        evaluations=evaluations,
        precision_bits=precision_bits,
    )


def limit_target(tau: Number) -> mpf:
    """2 / (2 + tau), the limit of S as L and M grow."""
    tau = as_fraction(tau)
    return mpf(2) / (2 + mpf(tau.numerator) / tau.denominator)


def limit_trend(
    L: int,
    M_values: Sequence[int],
    tau: Number,
    tol: float = DEFAULT_SOLVER_TOLERANCE,
    precision_bits: int = DEFAULT_PRECISION_BITS,
    term_budget: int = DEFAULT_TERM_BUDGET,
    on_step: Optional[Callable[[PressureSolution], None]] = None,
) -> TrendReport:
    """
    Solve S over an M sweep and report the distance to 2/(2 + tau).

    The distance trend is reported only; at fixed L the M -> infinity root can
    overshoot the limit value.
    """
    tau = as_fraction(tau)
    target = limit_target(tau)
    rows = []
    for M in M_values:
        solution = solve_S(L, M, tau, tol, precision_bits, term_budget)
        rows.append(
            TrendRow(
                M=M,
                S=solution.S,
                distance=abs(solution.S - target),
                residual=solution.residual,
                evaluations=solution.evaluations,
            )
        )
        if on_step is not None:
            on_step(solution)

    s_values = [row.S for row in rows]
    distances = [row.distance for row in rows]
    return TrendReport(
        L=L,
        tau=tau,
        target=target,
        rows=rows,
        s_increasing=all(b > a for a, b in zip(s_values, s_values[1:])),
        distance_weakly_decreasing=all(b <= a for a, b in zip(distances, distances[1:])),
    )
