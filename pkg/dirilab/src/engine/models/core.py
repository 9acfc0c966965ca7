from fractions import Fraction
from typing import Annotated, Any

from mpmath import mp, mpf
from pydantic import BaseModel, BeforeValidator, ConfigDict, PlainSerializer

from dirilab.src.engine.exact import as_fraction

HIGH_PRECISION_DIGITS = 30


def format_rational(value: Fraction) -> str:
    """Render a Fraction as 'p/q' (integers stay 'p/1')."""
    return f"{value.numerator}/{value.denominator}"


def _to_fraction(value: Any) -> Fraction:
    return as_fraction(value)


def _to_mpf(value: Any) -> mpf:
    if isinstance(value, mpf):
        return value
    if isinstance(value, Fraction):
        return mpf(value.numerator) / value.denominator
    return mpf(value)


def _format_mpf(value: mpf) -> str:
    return mp.nstr(value, HIGH_PRECISION_DIGITS)


ExactRational = Annotated[
    Fraction,
    BeforeValidator(_to_fraction),
    PlainSerializer(format_rational, return_type=str),
]

HighPrecision = Annotated[
    mpf,
    BeforeValidator(_to_mpf),
    PlainSerializer(_format_mpf, return_type=str),
]


class LabModel(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)


class Finding(LabModel):
    """A violated property reported by an audit."""

    check: str

    subject: str

    observed: str

    bound: str

    detail: str = ""
