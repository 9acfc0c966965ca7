"""Tests for the pressure sum, its root S and the limit trend."""

from fractions import Fraction

import pytest
from mpmath import mp, mpf

from dirilab.src.engine.errors import (
    CombinatorialExplosionError,
    DomainError,
    InvalidParameterError,
)
from dirilab.src.engine.pressure import (
    denominator_multiset,
    limit_target,
    limit_trend,
    pressure_sum,
    solve_S,
)


def bisect_root(f, lo=0.0, hi=1.0, steps=80):
    for _ in range(steps):
        mid = (lo + hi) / 2
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


class TestPressureSum:
    def test_denominators_of_two_by_two(self):
        assert denominator_multiset(2, 2) == ((2, 1), (3, 2), (5, 1))

    def test_exact_value(self):
        with mp.workprec(128):
            expected = mpf(1) / 4 + mpf(2) / 9 + mpf(1) / 25
            assert abs(pressure_sum(2, 2, 0, 1) - expected) < mpf(10) ** -30

    def test_term_count_at_zero(self):
        assert pressure_sum(3, 4, 1, 0) == 64

    def test_negative_s(self):
        with pytest.raises(DomainError):
            pressure_sum(2, 2, 0, -1)

    @pytest.mark.parametrize("L, M", [(1, 3), (2, 1)])
    def test_invalid_parameters(self, L, M):
        with pytest.raises(InvalidParameterError):
            pressure_sum(L, M, 0, 1)

    def test_term_budget(self):
        with pytest.raises(CombinatorialExplosionError):
            solve_S(10, 10, 1, term_budget=1000)


class TestSolveS:
    def test_root_against_an_independent_bisection(self):
        def f(s):
            return 2 ** (-2 * s) + 2 * 3 ** (-2 * s) + 5 ** (-2 * s) - 1

        solution = solve_S(2, 2, 0)
        assert 0.65 < float(solution.S) < 0.66
        assert abs(float(solution.S) - bisect_root(f)) < 1e-8
        assert solution.residual <= 1e-10

    def test_root_satisfies_the_equation(self):
        solution = solve_S(3, 3, Fraction(1, 2))
        assert abs(pressure_sum(3, 3, Fraction(1, 2), solution.S) - 1) <= 1e-10

    def test_increasing_in_M(self):
        values = [solve_S(2, M, 1).S for M in range(2, 21)]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_below_the_limit_for_small_alphabets(self):
        assert solve_S(2, 5, 1).S < limit_target(1)


class TestLimitTrend:
    def test_target(self):
        assert abs(limit_target(1) - mpf(2) / 3) < mpf(10) ** -30

    def test_sweep(self):
        seen = []
        report = limit_trend(3, [5, 10, 25], 1, on_step=seen.append)
        assert [row.M for row in report.rows] == [5, 10, 25]
        assert len(seen) == 3
        assert report.s_increasing
        assert 0.4 < float(report.rows[-1].S) < 0.72
        for row in report.rows:
            assert abs(row.distance - abs(row.S - report.target)) < mpf(10) ** -30
