"""
Exact rational helpers: "p/q" parsing, JSON encoding and exact ceilings.
Floats are rejected everywhere so threshold comparisons stay exact.
"""
import re
from fractions import Fraction
from math import isqrt
from typing import Union

from regforge.common.errors import InputError

RationalLike = Union[Fraction, int, str]

_RATIONAL_RE = re.compile(r"^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text: RationalLike) -> Fraction:
    """Parse an exact rational from 'p/q' or an integer literal; floats are refused."""
    if isinstance(text, bool):
        raise InputError(f"Not a rational: {text!r}")
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise InputError(f"Rationals must be given as 'p/q' strings, got {type(text).__name__}")
    match = _RATIONAL_RE.match(text)
    if not match:
        raise InputError(f"Not an exact rational (use 'p/q'): {text!r}")
    numerator = int(match.group(1))
    denominator = int(match.group(2)) if match.group(2) is not None else 1
    if denominator == 0:
        raise InputError(f"Zero denominator in {text!r}")
    return Fraction(numerator, denominator)


def format_rational(value: Fraction) -> str:
    """Render a rational as 'p/q' (or 'p' when integral)."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def ceil_fraction(value: Fraction) -> int:
    """Exact ceiling of a rational."""
    value = Fraction(value)
    return -((-value.numerator) // value.denominator)


def ceil_sqrt_times(coef: Fraction, radicand: Fraction, n: int) -> int:
    """Smallest integer m >= 0 with m >= coef * sqrt(radicand) * n, computed exactly."""
    coef = Fraction(coef)
    radicand = Fraction(radicand)
    if coef < 0 or radicand < 0 or n < 0:
        raise InputError("ceil_sqrt_times expects non-negative arguments")
    # m >= c*sqrt(r)*n  <=>  m^2 >= c^2 r n^2
    target = coef * coef * radicand * n * n
    m = isqrt(target.numerator // target.denominator)
    while Fraction(m * m) < target:
        m += 1
    return m


def floor_sqrt_times(coef: Fraction, radicand: Fraction, n: int) -> int:
    """Largest integer m >= 0 with m <= coef * sqrt(radicand) * n, computed exactly."""
    coef = Fraction(coef)
    radicand = Fraction(radicand)
    if coef < 0 or radicand < 0 or n < 0:
        raise InputError("floor_sqrt_times expects non-negative arguments")
    target = coef * coef * radicand * n * n
    m = isqrt(target.numerator // target.denominator)
    while Fraction((m + 1) * (m + 1)) <= target:
        m += 1
    return m
