"""
Exact tower arithmetic.

A TowerInt is one of
  int    a materialized non-negative integer below 2**budget,
  pow    2**E + c with E a TowerInt of at least budget bits and |c| small,
  hyper  a named value known only through a lower bound,
optionally inverted (reciprocal) for values such as 2**-512.
Forms are canonical, so ints always compare below pows and pows compare by exponent first.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Optional, Union

from regforge.common.errors import IncomparableError, NonIntegerExponentError
from regforge.config import get_settings

logger = logging.getLogger(__name__)

DECIMAL_BITS = 12000
COMPACT_BITS = 64


def _budget() -> int:
    return get_settings().tower_bits


@total_ordering
@dataclass(frozen=True, eq=False)
class TowerInt:
    """An exact (possibly symbolic) non-negative integer or its reciprocal"""
    kind: str
    value: int = 0
    exponent: Optional["TowerInt"] = None
    offset: int = 0
    expr: str = ""
    lower: Optional["TowerInt"] = None
    reciprocal: bool = False

    @classmethod
    def of(cls, value: Union[int, "TowerInt"]) -> "TowerInt":
        if isinstance(value, TowerInt):
            return value
        if value < 0:
            raise ValueError("TowerInt values are non-negative")
        if value.bit_length() > _budget():
            if value & (value - 1) == 0:
                return _pow(cls.of(value.bit_length() - 1), 0)
            raise ValueError(f"Integer of {value.bit_length()} bits exceeds the tower budget")
        return cls("int", value=value)

    @classmethod
    def hyper(cls, expr: str, lower: "TowerInt") -> "TowerInt":
        """A value known only to be at least lower."""
        if lower.kind == "hyper":
            lower = lower.lower
        return cls("hyper", expr=expr, lower=lower)

    @property
    def is_symbolic(self) -> bool:
        return self.kind != "int"

    def base(self) -> "TowerInt":
        """The value with the reciprocal flag cleared."""
        if not self.reciprocal:
            return self
        return TowerInt(self.kind, self.value, self.exponent, self.offset, self.expr, self.lower)

    def inverse(self) -> "TowerInt":
        if self.kind == "int" and self.value == 0:
            raise ZeroDivisionError("Reciprocal of zero")
        return TowerInt(self.kind, self.value, self.exponent, self.offset, self.expr, self.lower, not self.reciprocal)

    def is_power_of_two(self) -> bool:
        if self.kind == "int":
            return self.value > 0 and self.value & (self.value - 1) == 0
        if self.kind == "pow":
            return self.offset == 0
        raise IncomparableError(f"Cannot decide whether {self.expr} is a power of two")

    def log2(self) -> "TowerInt":
        """Exact log2 of a power of two (of the base when reciprocal)."""
        base = self.base()
        if base.kind == "hyper":
            raise IncomparableError(f"log2 of {base.expr} is not known exactly")
        if not base.is_power_of_two():
            raise NonIntegerExponentError(f"{base} is not a power of two")
        if base.kind == "int":
            return TowerInt.of(base.value.bit_length() - 1)
        return base.exponent

    def log2_fraction(self) -> Fraction:
        """Signed log2 as a rational; needs a materialized exponent."""
        exponent = self.log2()
        if exponent.kind != "int":
            raise IncomparableError("log2 exceeds the materialization budget")
        return Fraction(-exponent.value if self.reciprocal else exponent.value)

    def __int__(self) -> int:
        if self.kind != "int" or self.reciprocal:
            raise OverflowError(f"{self} is not a materialized integer")
        return self.value

    def __eq__(self, other) -> bool:
        if not isinstance(other, (int, TowerInt)):
            return NotImplemented
        try:
            return compare(self, TowerInt.of(other)) == 0
        except IncomparableError:
            return False

    def __lt__(self, other) -> bool:
        if not isinstance(other, (int, TowerInt)):
            return NotImplemented
        return compare(self, TowerInt.of(other)) < 0

    def __hash__(self) -> int:
        return hash((self.kind, self.value, self.exponent, self.offset, self.expr, self.reciprocal))

    def __str__(self) -> str:
        text = _format(self.base(), top=True)
        if not self.reciprocal:
            return text
        if self.base().kind != "hyper" and self.base().is_power_of_two():
            return f"2^-{_format(self.log2(), top=False)}"
        return f"1/({text})"

    def __repr__(self) -> str:
        return f"TowerInt({self})"


def _pow(exponent: TowerInt, offset: int) -> TowerInt:
    """Canonical 2**exponent + offset."""
    if exponent.kind == "hyper":
        return TowerInt.hyper(f"2^({exponent.expr})", _pow(exponent.lower, 0))
    if exponent.kind == "int" and exponent.value <= _budget():
        value = (1 << exponent.value) + offset
        if value < 0:
            raise ValueError("TowerInt values are non-negative")
        if value.bit_length() <= _budget():
            return TowerInt("int", value=value)
    return TowerInt("pow", exponent=exponent, offset=offset)


def two_to(exponent: Union[int, TowerInt]) -> TowerInt:
    """2**exponent."""
    exponent = TowerInt.of(exponent)
    if exponent.reciprocal:
        raise NonIntegerExponentError("Exponent must be a non-negative integer")
    return _pow(exponent, 0)


def add_int(x: TowerInt, c: int) -> TowerInt:
    """x + c for a small integer c."""
    if x.reciprocal:
        raise NonIntegerExponentError("Cannot add to a reciprocal")
    if x.kind == "int":
        return TowerInt.of(x.value + c)
    if x.kind == "pow":
        return _pow(x.exponent, x.offset + c)
    if c >= 0:
        lower = x.lower
    elif x.lower.kind == "int":
        lower = TowerInt.of(max(x.lower.value + c, 0))
    else:
        lower = add_int(x.lower, c)
    return TowerInt.hyper(f"{x.expr} + {c}" if c >= 0 else f"{x.expr} - {-c}", lower)


def mul_pow2(x: TowerInt, shift: int) -> TowerInt:
    """x * 2**shift; a negative shift must divide exactly."""
    if x.reciprocal:
        return mul_pow2(x.base(), -shift).inverse()
    if x.kind == "int":
        if shift >= 0:
            return TowerInt.of(x.value << shift)
        if x.value % (1 << -shift):
            raise NonIntegerExponentError(f"{x} is not divisible by 2^{-shift}")
        return TowerInt.of(x.value >> -shift)
    if x.kind == "pow":
        if shift < 0 and x.offset % (1 << -shift):
            raise NonIntegerExponentError(f"{x} is not divisible by 2^{-shift}")
        offset = x.offset << shift if shift >= 0 else x.offset >> -shift
        return _pow(add_int(x.exponent, shift), offset)
    lower = x.lower
    try:
        lower = mul_pow2(lower, shift)
    except NonIntegerExponentError:
        lower = TowerInt.of(0)
    return TowerInt.hyper(f"({x.expr}) * 2^{shift}", lower)


def divide_pow2(x: TowerInt, y: TowerInt) -> TowerInt:
    """x / y for y a materialized power of two, exact."""
    shift = y.log2()
    if shift.kind != "int":
        if x.kind == "hyper":
            return TowerInt.hyper(f"({x.expr}) / ({y})", TowerInt.of(0))
        raise NonIntegerExponentError(f"Cannot divide by {y} exactly")
    return mul_pow2(x, -shift.value)


def power(x: TowerInt, q: Fraction) -> TowerInt:
    """x**q for a power of two x when q * log2(x) is an integer."""
    exponent = x.log2_fraction() * Fraction(q)
    if exponent.denominator != 1:
        raise NonIntegerExponentError(f"({x})^{q} is not an integral power of two")
    if exponent >= 0:
        return two_to(int(exponent))
    return two_to(int(-exponent)).inverse()


def compact(x: TowerInt) -> str:
    """Short form for use inside expressions."""
    text = _format(x.base(), top=False)
    return f"1/({text})" if x.reciprocal else text


def _exceeds(bound: TowerInt, other: TowerInt) -> bool:
    try:
        return _compare_base(bound, other) > 0
    except IncomparableError:
        return False


def _compare_base(a: TowerInt, b: TowerInt) -> int:
    if a.kind == "hyper" or b.kind == "hyper":
        if a.kind == "hyper" and b.kind == "hyper" and a.expr == b.expr:
            return 0
        if a.kind == "hyper" and _exceeds(a.lower, b):
            return 1
        if b.kind == "hyper" and _exceeds(b.lower, a):
            return -1
        raise IncomparableError(f"Cannot order {a} and {b} from their bounds")
    if a.kind == "int" and b.kind == "int":
        return (a.value > b.value) - (a.value < b.value)
    if a.kind == "int":
        return -1
    if b.kind == "int":
        return 1
    by_exponent = _compare_base(a.exponent, b.exponent)
    if by_exponent:
        return by_exponent
    return (a.offset > b.offset) - (a.offset < b.offset)


def compare(a: TowerInt, b: TowerInt) -> int:
    """-1, 0 or 1; raises IncomparableError when bounds cannot decide."""
    if a.reciprocal and b.reciprocal:
        return _compare_base(b.base(), a.base())
    if a.reciprocal or b.reciprocal:
        # 1/x <= 1 <= y for every x, y >= 1
        flipped = b.reciprocal
        inverted, plain = (b.base(), a) if flipped else (a.base(), b)
        one = TowerInt.of(1)
        if _compare_base(inverted, one) == 0 and _compare_base(plain, one) == 0:
            result = 0
        elif _compare_base(plain, TowerInt.of(0)) == 0:
            result = 1
        else:
            result = -1
        return -result if flipped else result
    return _compare_base(a, b)


def _format(x: TowerInt, top: bool) -> str:
    if x.kind == "hyper":
        return f"{x.expr} (>= {_format(x.lower, top=False)})" if top else x.expr
    if x.kind == "int":
        bits = x.value.bit_length()
        power = x.value > 0 and x.value & (x.value - 1) == 0
        if power and (bits > DECIMAL_BITS or (not top and bits > COMPACT_BITS)):
            return f"2^{{{bits - 1}}}"
        if bits <= DECIMAL_BITS:
            return str(x.value)
        return f"<{bits}-bit integer>"
    text = f"2^{{{_format(x.exponent, top=False)}}}"
    if x.offset > 0:
        text += f" + {x.offset}"
    elif x.offset < 0:
        text += f" - {-x.offset}"
    return text
