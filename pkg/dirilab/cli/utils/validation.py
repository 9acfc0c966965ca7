"""
Validation utilities for CLI inputs.
"""

import re
from fractions import Fraction
from pathlib import Path
from typing import List, Tuple

from dirilab.cli.utils.errors import ConfigurationError, UsageError

_RATIONAL = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+))?\s*$")
_RANGE = re.compile(r"^\s*(\d+)\s*\.\.\s*(\d+)\s*$")


def parse_rational(text: str) -> Fraction:
    """
    Parse "p/q" or an integer into an exact Fraction.

    Raises:
        UsageError: If the text is not a rational or q is zero
    """
    match = _RATIONAL.match(text or "")
    if not match:
        raise UsageError(f"Not a rational 'p/q': {text!r}")
    numerator, denominator = match.group(1), match.group(2)
    if denominator is not None and int(denominator) == 0:
        raise UsageError(f"Zero denominator in {text!r}")
    return Fraction(int(numerator), int(denominator or 1))


def parse_number(text: str) -> Fraction:
    """Rational "p/q", integer or finite decimal such as 0.5."""
    try:
        return parse_rational(text)
    except UsageError:
        pass
    try:
        return Fraction(text.strip())
    except (ValueError, AttributeError):
        raise UsageError(f"Not a number: {text!r}")


def parse_int_list(text: str) -> List[int]:
    """
    Parse "2..20", "5,10,25" or "7" into a list of integers in the given order.

    Raises:
        UsageError: If the list is empty, malformed or a range runs backwards
    """
    text = (text or "").strip()
    match = _RANGE.match(text)
    if match:
        lo, hi = int(match.group(1)), int(match.group(2))
        if lo > hi:
            raise UsageError(f"Empty range {text!r}: start exceeds end")
        return list(range(lo, hi + 1))
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise UsageError(f"Expected 'a..b' or a comma separated list of integers, got {text!r}")
    if not values:
        raise UsageError("Empty integer list")
    return values


def parse_word(text: str) -> Tuple[int, ...]:
    """Partial quotients from "1,2,3" or "[1,2,3]"."""
    body = (text or "").strip().strip("[]")
    if not body:
        return ()
    try:
        return tuple(int(part) for part in body.split(","))
    except ValueError:
        raise UsageError(f"Expected comma separated partial quotients, got {text!r}")


def validate_output_directory(path: str) -> Path:
    """
    Validate output directory path.

    Raises:
        ConfigurationError: If the path is empty or an existing non-directory
    """
    if not path or not str(path).strip():
        raise ConfigurationError("Output directory cannot be empty")
    resolved = Path(path).expanduser().resolve()
    if resolved.exists() and not resolved.is_dir():
        raise ConfigurationError(f"Output path exists but is not a directory: {path}")
    return resolved
