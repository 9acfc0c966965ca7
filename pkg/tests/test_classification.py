"""Tests for approximating functions, membership evidence and the series test."""

import math
from fractions import Fraction

import numpy as np
import pytest

from dirilab.src.engine.cf_core import CFWord, PeriodicWord
from dirilab.src.engine.classification import (
    PsiSpec,
    Psi_to_psi,
    SmallPsi,
    dimension_formula,
    inclusion_audit,
    lower_order_tau,
    membership_evidence,
    psi_to_Psi,
    series_classify,
)
from dirilab.src.engine.errors import DomainError


class TestPsiSpec:
    def test_power_needs_nonnegative_tau(self):
        with pytest.raises(ValueError):
            PsiSpec.power(-1)

    def test_power_log_needs_beta(self):
        with pytest.raises(ValueError):
            PsiSpec(family="power_log", tau=Fraction(1))

    def test_tabulated_must_be_non_decreasing(self):
        PsiSpec.tabulated([(1, 1), (10, 2), (100, 5)])
        with pytest.raises(ValueError):
            PsiSpec.tabulated([(1, 3), (10, 2)])

    def test_tabulated_is_a_step_function(self):
        spec = PsiSpec.tabulated([(1, 1), (10, 2), (100, 5)])
        assert spec.compare(2, 50) == 0
        assert spec.compare(2, 9) == 1
        assert spec.compare(4, 100) == -1

    def test_power_comparison_is_exact(self):
        spec = PsiSpec.power(Fraction(1, 2))
        assert spec.compare(3, 9) == 0
        assert spec.compare(Fraction(299, 100), 9) == -1


class TestPsiConversion:
    def test_constant_Psi(self):
        # psi(t) = 1/(2t) gives t psi = 1/2 and Psi = 1
        spec = psi_to_Psi(SmallPsi(numerator=[1], denominator=[0, 2]))
        assert spec.family == "derived_from_psi"
        assert spec.monotone
        assert spec.compare(1, 1000) == 0
        assert lower_order_tau(spec) == 0

    def test_rational_psi_round_trip(self):
        psi = SmallPsi(numerator=[0, 1], denominator=[1, 1, 1])
        spec = psi_to_Psi(psi)
        assert lower_order_tau(spec) == 1
        assert Psi_to_psi(spec, 2) == psi(2) == Fraction(2, 7)

    def test_t_psi_equal_to_one_is_rejected(self):
        with pytest.raises(DomainError):
            psi_to_Psi(SmallPsi(numerator=[1], denominator=[0, 1]))

    def test_integer_power_inverse(self):
        assert Psi_to_psi(PsiSpec.power(1), 3) == Fraction(3, 12)


class TestMembershipEvidence:
    def test_g_witnesses_against_q(self):
        report = membership_evidence(CFWord((1, 1, 4, 4)), PsiSpec.power(1))
        assert report.g_witnesses == [2, 3]
        assert report.k_witnesses == []
        assert report.d_status == "non-improvable-evidence"

    def test_large_quotient_is_a_k_witness(self):
        report = membership_evidence(CFWord((1, 100)), PsiSpec.power(0))
        assert report.g_witnesses == [1]
        assert report.k_witnesses == [1]

    def test_improvable_evidence(self):
        report = membership_evidence(CFWord((1,) * 8), PsiSpec.power(2))
        assert report.g_witnesses == []
        assert report.d_status == "improvable-evidence"
        assert report.threshold == 4

    def test_constant_scales_the_threshold(self):
        word = CFWord((1, 1, 4, 4))
        spec = PsiSpec.power(1)
        assert membership_evidence(word, spec, C=Fraction(1, 4)).g_witnesses == [1, 2, 3]
        assert membership_evidence(word, spec, C=10).g_witnesses == []

    def test_periodic_word_needs_depth(self):
        with pytest.raises(DomainError):
            membership_evidence(PeriodicWord.for_sqrt(2), PsiSpec.power(1))
        report = membership_evidence(PeriodicWord.for_sqrt(2), PsiSpec.power(1), depth=10)
        assert report.depth == 10
        # all quotients are 2, so only a_1 a_2 = 4 beats q_1 = 2
        assert report.g_witnesses == [1]

    def test_short_word_is_rejected(self):
        with pytest.raises(DomainError):
            membership_evidence(CFWord((3,)), PsiSpec.power(1))

    def test_inclusions_hold_on_a_sample(self):
        words = [CFWord(w) for w in [(1, 1, 4, 4), (1, 100), (2, 3, 50, 1, 7), (1,) * 8]]
        assert inclusion_audit(words, PsiSpec.power(1)) == []

    @pytest.mark.parametrize("tau", [Fraction(1, 2), 1, 2])
    def test_inclusions_hold_on_random_words(self, tau):
        rng = np.random.default_rng(7)
        words = []
        for _ in range(200):
            length = int(rng.integers(2, 12))
            quotients = rng.integers(1, 6, size=length)
            # occasional large quotient so that G and K witnesses occur
            quotients[rng.integers(0, length)] = int(rng.integers(1, 400))
            words.append(CFWord(tuple(int(a) for a in quotients)))
        assert inclusion_audit(words, PsiSpec.power(tau)) == []

    def test_empty_sample_is_rejected(self):
        with pytest.raises(DomainError):
            inclusion_audit([], PsiSpec.power(1))


class TestSeriesAndDimension:
    @pytest.mark.parametrize("tau", [0, Fraction(1, 2), 1, 2, 5])
    def test_critical_exponent_matches_the_formula(self, tau):
        verdict = series_classify(PsiSpec.power(tau), Fraction(1, 2))
        assert verdict.critical_s == dimension_formula(Fraction(tau))

    def test_power_verdicts(self):
        spec = PsiSpec.power(1)
        assert series_classify(spec, Fraction(1, 2)).verdict == "diverges"
        assert series_classify(spec, Fraction(2, 3)).verdict == "diverges"
        assert series_classify(spec, Fraction(3, 4)).verdict == "converges"

    def test_log_factor_decides_at_the_critical_exponent(self):
        s = Fraction(2, 3)
        assert series_classify(PsiSpec.power_log(1, 2), s).verdict == "converges"
        assert series_classify(PsiSpec.power_log(1, 1), s).verdict == "diverges"

    def test_s_must_lie_in_the_unit_interval(self):
        with pytest.raises(DomainError):
            series_classify(PsiSpec.power(1), 1)

    def test_dimension_formula(self):
        assert dimension_formula(PsiSpec.power(1)) == Fraction(2, 3)
        assert dimension_formula(Fraction(0)) == 1
        assert dimension_formula(math.inf) == 0.0
        with pytest.raises(DomainError):
            dimension_formula(Fraction(-1))

    def test_tabulated_tau_estimate(self):
        table = [(2**k, 2**k) for k in range(12)]
        spec = PsiSpec.tabulated(table)
        assert lower_order_tau(spec) == pytest.approx(1.0)
        assert series_classify(spec, Fraction(9, 10)).verdict == "converges"
        assert series_classify(spec, Fraction(1, 2)).verdict == "diverges"
