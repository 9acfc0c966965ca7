"""
Exact comparisons against irrational powers.

Window ranges such as [q^tau / 4, q^tau / 2] and the schedule sandwich
q <= Q^(1-delta) involve powers with rational exponents. Those are never
rounded for a decision: value <= base**exponent is settled by comparing
value**den with base**num in exact integer arithmetic. mpmath only provides
the starting guess for floor/ceil searches.
"""

from fractions import Fraction
from numbers import Rational
from typing import Union

from mpmath import mp, mpf

Number = Union[int, Fraction, float, str]

_GUESS_PRECISION_BITS = 96


def as_fraction(value: Number) -> Fraction:
    """Convert user input to a Fraction; floats are read by their decimal repr."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(str(value).strip())


def compare_power(value: Fraction, base: Union[int, Fraction], exponent: Fraction) -> int:
    """
    Sign of value - base**exponent, exactly.

    Args:
        value: Rational left-hand side
        base: Positive rational base
        exponent: Rational exponent

    Returns:
        -1, 0 or 1
    """
    base = Fraction(base)
    exponent = Fraction(exponent)
    if base <= 0:
        raise ValueError(f"base must be positive, got {base}")
    if value <= 0:
        return -1
    lhs = Fraction(value) ** exponent.denominator
    rhs = base**exponent.numerator
    return (lhs > rhs) - (lhs < rhs)


def power_mpf(base: Union[int, Fraction], exponent: Union[Fraction, mpf]) -> mpf:
    """base**exponent at the current mpmath precision."""
    base = Fraction(base)
    if isinstance(exponent, Fraction):
        exponent = mpf(exponent.numerator) / exponent.denominator
    return (mpf(base.numerator) / base.denominator) ** exponent


def _guess(
    scale: Fraction, base: Union[int, Fraction], exponent: Fraction, offset: Fraction
) -> int:
    with mp.workprec(_GUESS_PRECISION_BITS):
        x = mpf(scale.numerator) / scale.denominator * power_mpf(base, exponent)
        return int(mp.floor(x + mpf(offset.numerator) / offset.denominator))


def floor_scaled_power(
    scale: Number,
    base: Union[int, Fraction],
    exponent: Number,
    offset: Number = 0,
) -> int:
    """
    Largest integer a with a - offset <= scale * base**exponent.

    With offset = 1/2 this is round-half-up of scale * base**exponent.
    """
    scale = as_fraction(scale)
    exponent = as_fraction(exponent)
    offset = as_fraction(offset)
    if scale <= 0:
        raise ValueError(f"scale must be positive, got {scale}")

    def fits(a: int) -> bool:
        y = Fraction(a) - offset
        if y <= 0:
            return True
        return compare_power(y / scale, base, exponent) <= 0

    a = _guess(scale, base, exponent, offset)
    while not fits(a):
        a -= 1
    while fits(a + 1):
        a += 1
    return a


def ceil_scaled_power(scale: Number, base: Union[int, Fraction], exponent: Number) -> int:
    """Smallest integer a with a >= scale * base**exponent."""
    scale = as_fraction(scale)
    exponent = as_fraction(exponent)
    if scale <= 0:
        raise ValueError(f"scale must be positive, got {scale}")

    def covers(a: int) -> bool:
        if a <= 0:
            return False
        return compare_power(Fraction(a) / scale, base, exponent) >= 0

    a = _guess(scale, base, exponent, Fraction(0)) + 1
    while not covers(a):
        a += 1
    while a > 1 and covers(a - 1):
        a -= 1
    return a


def at_least_scaled_power(
    value: Fraction, scale: Number, base: Union[int, Fraction], exponent: Number
) -> bool:
    """value >= scale * base**exponent, exactly."""
    scale = as_fraction(scale)
    return compare_power(Fraction(value) / scale, base, as_fraction(exponent)) >= 0


def at_most_scaled_power(
    value: Fraction, scale: Number, base: Union[int, Fraction], exponent: Number
) -> bool:
    """value <= scale * base**exponent, exactly."""
    scale = as_fraction(scale)
    return compare_power(Fraction(value) / scale, base, as_fraction(exponent)) <= 0
