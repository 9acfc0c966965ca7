"""Tests for the Holder audits and the dimension estimators."""

from fractions import Fraction

import pytest

from dirilab.src.config import DEFAULT_ESTIMATOR_TOLERANCE
from dirilab.src.engine.cantor import make_schedule
from dirilab.src.engine.classification import dimension_formula
from dirilab.src.engine.dimension import (
    box_count,
    covers_from_tree,
    cross_validation,
    exponent_target,
    four_interval_check,
    holder_audit_balls,
    holder_audit_intervals,
    log_uniform_radius,
    mdp_lower_bound,
)
from dirilab.src.engine.errors import InsufficientDataError
from dirilab.src.engine.geometry import Interval
from dirilab.src.engine.measure import assign_measure, lebesgue_tree
from dirilab.src.engine.models import DimensionEstimate
from dirilab.src.engine.pressure import solve_S


@pytest.fixture(scope="module")
def control_tree():
    return lebesgue_tree(14)


@pytest.fixture(scope="module")
def cantor_tree():
    return assign_measure(make_schedule(3, 2, [1, 2]), solve_S(2, 3, 1), max_level=6)


def estimate(method, value):
    return DimensionEstimate(method=method, value=value, levels_used=[1, 2, 3], residual=0.0)


class TestLebesgueControl:
    def test_interval_slope_is_one(self, control_tree):
        audit = holder_audit_intervals(control_tree)
        assert audit.exponent_target == 1.0
        assert audit.fitted_slope == pytest.approx(1.0, abs=1e-9)
        assert audit.meets_target

    def test_ball_ratio_is_bounded(self, control_tree):
        audit = holder_audit_balls(control_tree, samples=200, seed=0)
        assert audit.max_ratio <= 2 + 2**-6 + 1e-9
        assert audit.meets_target

    def test_mdp_fit_is_close_to_one(self, control_tree):
        assert mdp_lower_bound(control_tree, samples=200, seed=0).value > 0.95

    def test_box_count_is_one(self):
        result = box_count(covers_from_tree(lebesgue_tree(10)))
        assert result.method == "box-count"
        assert result.value == pytest.approx(1.0, abs=1e-9)

    def test_no_windows_to_check(self, control_tree):
        assert four_interval_check(control_tree) == []


class TestCantorMeasure:
    def test_exponent_target(self, cantor_tree):
        assert exponent_target(cantor_tree) == pytest.approx(float(cantor_tree.solution.S) - 5)

    def test_interval_audit_meets_the_target(self, cantor_tree):
        audit = holder_audit_intervals(cantor_tree)
        assert audit.levels == [1, 2, 3, 4, 5, 6]
        assert audit.meets_target

    def test_ball_audit_is_deterministic(self, cantor_tree):
        first = holder_audit_balls(cantor_tree, samples=50, seed=3)
        second = holder_audit_balls(cantor_tree, samples=50, seed=3)
        assert first == second
        assert first.kind == "balls"

    def test_four_intervals(self, cantor_tree):
        assert four_interval_check(cantor_tree) == []

    def test_box_count_is_a_dimension(self, cantor_tree):
        value = box_count(covers_from_tree(cantor_tree)).value
        assert 0.0 <= value <= 1.0

    def test_box_count_uses_block_levels(self, cantor_tree):
        assert sorted(covers_from_tree(cantor_tree)) == [0, 2, 4, 6]


class TestWiderAlphabet:
    @pytest.fixture(scope="class")
    def tree(self):
        return assign_measure(make_schedule(5, 2, [1]), solve_S(2, 5, 1), max_level=6)

    def test_interval_audit_meets_the_target(self, tree):
        assert holder_audit_intervals(tree).meets_target

    def test_four_intervals(self, tree):
        assert four_interval_check(tree) == []


class TestEstimatorsAgainstS:
    # windows at 5; level 5 holds 185335 intervals
    @pytest.fixture(scope="class")
    def solution(self):
        return solve_S(3, 10, 1)

    @pytest.fixture(scope="class")
    def tree(self, solution):
        return assign_measure(make_schedule(10, 3, [1]), solution, max_level=5)

    def test_box_count_is_close_to_S(self, tree, solution):
        result = box_count(covers_from_tree(tree))
        assert result.levels_used == [0, 3, 5]
        assert abs(result.value - float(solution.S)) <= DEFAULT_ESTIMATOR_TOLERANCE

    def test_mdp_fit_is_close_to_S(self, tree, solution):
        result = mdp_lower_bound(tree, samples=200, seed=0)
        assert abs(result.value - float(solution.S)) <= DEFAULT_ESTIMATOR_TOLERANCE

    def test_cross_validation_passes(self, tree, solution):
        estimates = [
            box_count(covers_from_tree(tree)),
            mdp_lower_bound(tree, samples=200, seed=0),
        ]
        report = cross_validation(estimates, float(solution.S), float(dimension_formula(1)))
        assert all(report.within_tolerance.values())
        assert report.lower_bound_consistent
        assert report.formula == pytest.approx(2 / 3)


class TestEstimators:
    def test_box_count_needs_three_levels(self):
        covers = {
            1: [Interval(Fraction(0), Fraction(1, 2))],
            2: [Interval(Fraction(0), Fraction(1, 4))],
        }
        with pytest.raises(InsufficientDataError):
            box_count(covers)

    def test_ball_audit_needs_depth(self):
        with pytest.raises(InsufficientDataError):
            holder_audit_balls(lebesgue_tree(1))

    def test_radius_interpolation_survives_tiny_gaps(self):
        lower, upper = Fraction(1, 10**900), Fraction(1, 10)
        for u in (0.0, 0.5, 0.99):
            radius = log_uniform_radius(lower, upper, u)
            assert lower <= radius <= upper
        assert log_uniform_radius(lower, upper, 0.0) == lower

    def test_cross_validation_within_tolerance(self):
        report = cross_validation(
            [estimate("box-count", 0.7), estimate("mdp-fit", 0.65)], S=0.68, formula=2 / 3
        )
        assert report.within_tolerance == {"box-count": True, "mdp-fit": True}
        assert report.distances["box-count"] == pytest.approx(0.02)
        assert report.lower_bound_consistent

    def test_mdp_above_box_count_is_inconsistent(self):
        report = cross_validation(
            [estimate("box-count", 0.5), estimate("mdp-fit", 0.9)], S=0.68, formula=2 / 3
        )
        assert not report.lower_bound_consistent
        assert report.within_tolerance["box-count"] is False
