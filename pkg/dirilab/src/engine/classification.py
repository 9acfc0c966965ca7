"""
Approximating functions and what finite words say about them.

A PsiSpec describes Psi (power, power-log, tabulated step function, or derived
from a small psi by Psi(t) = 1/(1 - t psi(t)) - 1). Words give finite evidence
for the sets G(Psi), K(Psi) and D(psi); series verdicts and the dimension value
2/(2 + tau) come from the lower order tau.
"""

import logging
import math
from fractions import Fraction
from typing import List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
from mpmath import mp, mpf
from pydantic import Field, model_validator

from dirilab.src.config import DEFAULT_PRECISION_BITS
from dirilab.src.engine.cf_core import CFWord, PeriodicWord
from dirilab.src.engine.errors import DomainError
from dirilab.src.engine.exact import Number, as_fraction, compare_power
from dirilab.src.engine.models import (
    EvidenceReport,
    ExactRational,
    Finding,
    LabModel,
    SeriesVerdict,
)

logger = logging.getLogger(__name__)

K_SUFFICIENT_MULTIPLIER = 3

DOMAIN_GRID_SIZE = 1024

TAIL_WINDOW = 0.5

HEURISTIC_MARGIN = 0.05

TauValue = Union[Fraction, float]


def _poly_eval(coefficients: Sequence[Fraction], t: Fraction) -> Fraction:
    result = Fraction(0)
    for c in reversed(coefficients):
        result = result * t + c
    return result


def _poly_trim(coefficients: Sequence[Fraction]) -> List[Fraction]:
    trimmed = list(coefficients)
    while trimmed and trimmed[-1] == 0:
        trimmed.pop()
    return trimmed


class SmallPsi(LabModel):
    """psi(t) = P(t) / Q(t), coefficients in ascending degree."""

    numerator: List[ExactRational]
    denominator: List[ExactRational]

    def __call__(self, t: Number) -> Fraction:
        t = as_fraction(t)
        den = _poly_eval(self.denominator, t)
        if den == 0:
            raise DomainError(f"psi has a pole at t={t}")
        return _poly_eval(self.numerator, t) / den

    def t_numerator(self) -> List[Fraction]:
        """Coefficients of t * P(t)."""
        return [Fraction(0)] + list(self.numerator)

    def gap_polynomial(self) -> List[Fraction]:
        """Coefficients of Q(t) - t P(t)."""
        tp = self.t_numerator()
        size = max(len(tp), len(self.denominator))
        padded_q = list(self.denominator) + [Fraction(0)] * (size - len(self.denominator))
        padded_tp = tp + [Fraction(0)] * (size - len(tp))
        return _poly_trim([q - p for q, p in zip(padded_q, padded_tp)])


class PsiSpec(LabModel):
    """Descriptor of a non-decreasing positive approximating function Psi."""

    family: Literal["power", "power_log", "tabulated", "derived_from_psi"]
    tau: Optional[ExactRational] = None
    beta: Optional[ExactRational] = None
    table: Optional[List[Tuple[int, ExactRational]]] = None
    psi: Optional[SmallPsi] = None
    monotone: bool = True
    precision_bits: int = Field(default=DEFAULT_PRECISION_BITS, exclude=True)

    @model_validator(mode="after")
    def _check_family(self) -> "PsiSpec":
        if self.family in ("power", "power_log"):
            if self.tau is None:
                raise DomainError(f"{self.family} family needs tau")
            if self.tau < 0:
                raise DomainError(f"tau must be >= 0, got {self.tau}")
            if self.family == "power_log" and self.beta is None:
                raise DomainError("power_log family needs beta")
        elif self.family == "tabulated":
            if not self.table:
                raise DomainError("tabulated family needs a nonempty table")
            points = [t for t, _ in self.table]
            values = [v for _, v in self.table]
            if points != sorted(set(points)) or points[0] < 1:
                raise DomainError("table points must be strictly increasing integers >= 1")
            if any(v <= 0 for v in values):
                raise DomainError("tabulated values must be positive")
            if any(b < a for a, b in zip(values, values[1:])):
                raise DomainError("tabulated values must be non-decreasing")
        elif self.psi is None:
            raise DomainError("derived_from_psi family needs psi")
        return self

    @classmethod
    def power(cls, tau: Number) -> "PsiSpec":
        return cls(family="power", tau=as_fraction(tau))

    @classmethod
    def power_log(cls, tau: Number, beta: Number) -> "PsiSpec":
        return cls(family="power_log", tau=as_fraction(tau), beta=as_fraction(beta))

    @classmethod
    def tabulated(cls, table: Sequence[Tuple[int, Number]]) -> "PsiSpec":
        return cls(family="tabulated", table=[(int(t), as_fraction(v)) for t, v in table])

    def _table_value(self, t: Fraction) -> Fraction:
        value = self.table[0][1]
        for point, v in self.table:
            if point > t:
                break
            value = v
        return value

    def _derived_value(self, t: Fraction) -> Fraction:
        tp = _poly_eval(self.psi.t_numerator(), t)
        return tp / (_poly_eval(self.psi.denominator, t) - tp)

    def evaluate(self, t: Number) -> mpf:
        """Psi(t) at this family's working precision."""
        t = as_fraction(t)
        with mp.workprec(self.precision_bits):
            t_mp = mpf(t.numerator) / t.denominator
            if self.family == "power":
                return t_mp ** (mpf(self.tau.numerator) / self.tau.denominator)
            if self.family == "power_log":
                tau = mpf(self.tau.numerator) / self.tau.denominator
                beta = mpf(self.beta.numerator) / self.beta.denominator
                return t_mp**tau * (1 + mp.log(t_mp)) ** beta
            if self.family == "tabulated":
                v = self._table_value(t)
            else:
                v = self._derived_value(t)
            return mpf(v.numerator) / v.denominator

    def compare(self, value: Number, t: Number) -> int:
        """Sign of value - Psi(t); exact except for the power-log family."""
        value = as_fraction(value)
        t = as_fraction(t)
        if self.family == "power":
            return compare_power(value, t, self.tau)
        if self.family == "tabulated":
            psi_t = self._table_value(t)
            return (value > psi_t) - (value < psi_t)
        if self.family == "derived_from_psi":
            psi_t = self._derived_value(t)
            return (value > psi_t) - (value < psi_t)
        with mp.workprec(self.precision_bits):
            diff = mpf(value.numerator) / value.denominator - self.evaluate(t)
            return (diff > 0) - (diff < 0)


def psi_to_Psi(psi: SmallPsi) -> PsiSpec:
    """
    Psi(t) = 1/(1 - t psi(t)) - 1 = t P / (Q - t P).

    Raises:
        DomainError: Where t psi(t) >= 1 or Psi is not positive
    """
    tp = _poly_trim(psi.t_numerator())
    q = _poly_trim(psi.denominator)
    gap = psi.gap_polynomial()
    if not tp or not q:
        raise DomainError("psi must have nonzero numerator and denominator")
    if not gap:
        raise DomainError("t psi(t) == 1 identically")

    previous: Optional[Fraction] = None
    monotone = True
    for t in range(1, DOMAIN_GRID_SIZE + 1):
        product = t * psi(t)
        if not 0 < product < 1:
            raise DomainError(f"t psi(t) must lie in (0, 1); at t={t} it is {product}")
        value = product / (1 - product)
        if previous is not None and value < previous:
            monotone = False
        previous = value

    if tp[-1] / q[-1] <= 0 or gap[-1] / q[-1] <= 0:
        raise DomainError("t psi(t) leaves (0, 1) for large t")

    return PsiSpec(family="derived_from_psi", psi=psi, monotone=monotone)


def Psi_to_psi(spec: PsiSpec, t: Number) -> Fraction:
    """Inverse algebra psi(t) = Psi(t) / (t (1 + Psi(t))) at a rational point."""
    t = as_fraction(t)
    if spec.family == "derived_from_psi":
        value = spec._derived_value(t)
    elif spec.family == "tabulated":
        value = spec._table_value(t)
    elif spec.family == "power" and spec.tau.denominator == 1:
        value = t ** spec.tau.numerator
    else:
        raise DomainError(f"{spec.family} Psi is not rational at t={t}")
    return value / (t * (1 + value))


def lower_order_tau(spec: PsiSpec, tail_window: float = TAIL_WINDOW) -> TauValue:
    """
    liminf log Psi(q) / log q.

    Exact for power, power-log and derived specs (log factors do not change it);
    tabulated specs take the minimum over the last `tail_window` share of points.
    """
    if spec.family in ("power", "power_log"):
        return spec.tau
    if spec.family == "derived_from_psi":
        tp = _poly_trim(spec.psi.t_numerator())
        return Fraction(len(tp) - len(spec.psi.gap_polynomial()))

    points = [(t, v) for t, v in spec.table if t > 1]
    if not points:
        raise DomainError("tabulated spec needs points with t > 1 to estimate tau")
    start = min(int(len(points) * (1 - tail_window)), len(points) - 1)
    ratios = [math.log(v) / math.log(t) for t, v in points[start:]]
    estimate = min(ratios)
    logger.debug("tau estimate %.6f over %d tail points", estimate, len(ratios))
    return estimate


def _word_and_depth(word: Union[CFWord, PeriodicWord], depth: Optional[int]) -> CFWord:
    if isinstance(word, PeriodicWord):
        if depth is None:
            raise DomainError("periodic words need an explicit depth")
        return word.prefix(depth)
    if depth is not None:
        return word.prefix(depth)
    return word


def membership_evidence(
    word: Union[CFWord, PeriodicWord],
    spec: PsiSpec,
    C: Number = 1,
    threshold: Optional[int] = None,
    depth: Optional[int] = None,
) -> EvidenceReport:
    """
    Finite-depth evidence for G(C Psi), K(C Psi) and D(psi).

    G witnesses: a_n a_{n+1} > C Psi(q_n). K witnesses use the sufficient
    condition a_{n+1} > 3 C Psi(q_n). The Dirichlet status is non-improvable when
    some a_n a_{n+1} > Psi(q_n), improvable when a_n a_{n+1} <= Psi(q_n)/4 for all
    n from the threshold on, and indeterminate otherwise.
    """
    word = _word_and_depth(word, depth)
    C = as_fraction(C)
    if word.n < 2:
        raise DomainError(f"word length must be >= 2, got {word.n}")
    if C <= 0:
        raise DomainError(f"C must be positive, got {C}")
    depth = word.n
    threshold = max(1, depth // 2) if threshold is None else threshold

    g_witnesses, k_witnesses = [], []
    non_improvable = False
    first_undetermined: Optional[int] = None
    for n in range(1, depth):
        q_n = word.q(n)
        product = word.a(n) * word.a(n + 1)
        if spec.compare(Fraction(product) / C, q_n) > 0:
            g_witnesses.append(n)
        if spec.compare(Fraction(word.a(n + 1)) / (K_SUFFICIENT_MULTIPLIER * C), q_n) > 0:
            k_witnesses.append(n)
        if spec.compare(product, q_n) > 0:
            non_improvable = True
        elif n >= threshold and first_undetermined is None and spec.compare(4 * product, q_n) > 0:
            first_undetermined = n

    if non_improvable:
        status = "non-improvable-evidence"
    elif first_undetermined is None and threshold < depth:
        status = "improvable-evidence"
    else:
        status = "indeterminate"

    return EvidenceReport(
        depth=depth,
        g_witnesses=g_witnesses,
        k_witnesses=k_witnesses,
        d_status=status,
        first_undetermined=first_undetermined,
        threshold=threshold,
    )


def inclusion_audit(words: Sequence[CFWord], spec: PsiSpec) -> List[Finding]:
    """
    Check K(3 Psi) in G(Psi), G(Psi) in D(psi)^c and G(Psi) in G(Psi/4) at
    evidence level on every word of length >= 2.
    """
    if not words:
        raise DomainError("inclusion audit needs a nonempty sample")
    findings: List[Finding] = []
    for word in words:
        if word.n < 2:
            continue
        report = membership_evidence(word, spec)
        quarter = membership_evidence(word, spec, C=Fraction(1, 4))
        g = set(report.g_witnesses)

        stray_k = sorted(set(report.k_witnesses) - g)
        if stray_k:
            findings.append(
                Finding(
                    check="k-in-g",
                    subject=str(word),
                    observed=str(stray_k),
                    bound="subset of G witnesses",
                )
            )
        if g and report.d_status == "improvable-evidence":
            findings.append(
                Finding(
                    check="g-not-improvable",
                    subject=str(word),
                    observed=report.d_status,
                    bound="not improvable-evidence",
                )
            )
        stray_g = sorted(g - set(quarter.g_witnesses))
        if stray_g:
            findings.append(
                Finding(
                    check="g-in-quarter-g",
                    subject=str(word),
                    observed=str(stray_g),
                    bound="subset of G(Psi/4) witnesses",
                )
            )
    logger.debug("inclusion audit over %d words: %d findings", len(words), len(findings))
    return findings


def _critical_exponent(tau: Fraction) -> Optional[Fraction]:
    return Fraction(2) / (2 + tau) if 2 + tau > 0 else None


def _tabulated_verdict(spec: PsiSpec, s: Fraction) -> SeriesVerdict:
    points = [(t, v) for t, v in spec.table if t > 1]
    if len(points) < 3:
        return SeriesVerdict(s=s, verdict="unknown", method="partial-sum-heuristic")
    start = min(int(len(points) * (1 - TAIL_WINDOW)), len(points) - 3)
    tail = points[start:]
    log_t = np.log([float(t) for t, _ in tail])
    log_term = [
        math.log(t) - float(s) * (2 * math.log(t) + math.log(v)) for t, v in tail
    ]
    slope, _ = np.polyfit(log_t, log_term, 1)
    if slope < -1 - HEURISTIC_MARGIN:
        verdict = "converges"
    elif slope > -1 + HEURISTIC_MARGIN:
        verdict = "diverges"
    else:
        verdict = "unknown"
    logger.debug("tabulated series slope %.4f -> %s", slope, verdict)
    return SeriesVerdict(s=s, verdict=verdict, method="partial-sum-heuristic")


def series_classify(spec: PsiSpec, s: Number) -> SeriesVerdict:
    """
    Convergence of sum_t t (1 / (t^2 Psi(t)))^s.

    Power-type specs have term t^(1 - (2 + tau) s) (times (1 + log t)^(-beta s)
    for power-log), so the verdict is exact: convergence iff s > 2/(2 + tau),
    with the log factor deciding at the critical exponent.
    """
    s = as_fraction(s)
    if not 0 < s < 1:
        raise DomainError(f"s must lie in (0, 1), got {s}")
    if spec.family == "tabulated":
        return _tabulated_verdict(spec, s)

    tau = lower_order_tau(spec)
    critical = _critical_exponent(tau)
    exponent = 1 - (2 + tau) * s
    if exponent < -1:
        verdict = "converges"
    elif exponent > -1:
        verdict = "diverges"
    elif spec.family == "power_log":
        verdict = "converges" if spec.beta * s > 1 else "diverges"
    else:
        verdict = "diverges"
    return SeriesVerdict(s=s, verdict=verdict, method="exponent-comparison", critical_s=critical)


def dimension_formula(spec: Union[PsiSpec, TauValue]) -> TauValue:
    """
    2 / (tau + 2), independent of the constant C; tau = inf gives 0.

    Raises:
        DomainError: If tau < 0
    """
    tau = lower_order_tau(spec) if isinstance(spec, PsiSpec) else spec
    if isinstance(tau, int):
        tau = Fraction(tau)
    if isinstance(tau, float) and math.isinf(tau):
        return 0.0
    if tau < 0:
        raise DomainError(f"dimension formula needs tau >= 0, got {tau}")
    if isinstance(tau, Fraction):
        return Fraction(2) / (tau + 2)
    return 2.0 / (tau + 2.0)
