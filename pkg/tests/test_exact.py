"""Tests for exact rational/power comparisons."""

from fractions import Fraction

from dirilab.src.engine.exact import (
    as_fraction,
    at_least_scaled_power,
    at_most_scaled_power,
    ceil_scaled_power,
    compare_power,
    floor_scaled_power,
)


class TestAsFraction:
    def test_float_is_read_through_its_decimal_repr(self):
        assert as_fraction(0.1) == Fraction(1, 10)

    def test_strings_and_ints(self):
        assert as_fraction("5/8") == Fraction(5, 8)
        assert as_fraction(3) == Fraction(3)


class TestComparePower:
    def test_exact_square_root(self):
        assert compare_power(Fraction(2), 4, Fraction(1, 2)) == 0

    def test_above_and_below(self):
        assert compare_power(Fraction(3), 8, Fraction(1, 2)) == 1
        assert compare_power(Fraction(2), 8, Fraction(1, 2)) == -1

    def test_integer_exponent(self):
        assert compare_power(Fraction(9), 3, Fraction(2)) == 0
        assert compare_power(Fraction(10), 3, Fraction(2)) == 1


class TestScaledPowers:
    def test_floor_and_ceil_of_square_root(self):
        assert floor_scaled_power(Fraction(1, 2), 9, 1) == 4
        assert ceil_scaled_power(Fraction(1, 4), 9, 1) == 3

    def test_irrational_power(self):
        # sqrt(2) = 1.414...
        assert floor_scaled_power(1, 2, Fraction(1, 2)) == 1
        assert ceil_scaled_power(1, 2, Fraction(1, 2)) == 2

    def test_offset(self):
        assert floor_scaled_power(Fraction(1, 4), 2**40, Fraction(3, 10), Fraction(1, 2)) == 1024

    def test_threshold_helpers(self):
        assert at_least_scaled_power(3, 1, 9, Fraction(1, 2))
        assert not at_least_scaled_power(2, 1, 9, Fraction(1, 2))
        assert at_most_scaled_power(4, Fraction(1, 2), 64, Fraction(1, 2))
        assert not at_most_scaled_power(5, Fraction(1, 2), 64, Fraction(1, 2))
