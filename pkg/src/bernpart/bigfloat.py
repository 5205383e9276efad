"""Decimal-backed arbitrary precision: BigFloat values, certified pi, sin.

All arithmetic runs in :mod:`decimal` contexts with ROUND_HALF_EVEN.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Context, Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from math import isqrt

__all__ = [
    "BigFloat",
    "PiValue",
    "PrecisionError",
    "MIN_PRECISION",
    "MAX_PRECISION",
    "guard_digits",
    "context",
    "compute_pi",
    "pi_decimal",
    "to_decimal",
    "dsin",
]

MIN_PRECISION = 10
MAX_PRECISION = 1000


class PrecisionError(ValueError):
    """Requested precision outside [MIN_PRECISION, MAX_PRECISION]."""


def check_precision(precision: int, maximum: int = MAX_PRECISION) -> int:
    if not isinstance(precision, int) or not MIN_PRECISION <= precision <= maximum:
        raise PrecisionError(f"precision must be in [{MIN_PRECISION}, {maximum}], got {precision}")
    return precision


def guard_digits(precision: int) -> int:
    return max(10, precision // 10)


def context(digits: int) -> Context:
    return Context(prec=digits, rounding=ROUND_HALF_EVEN, Emax=10**9, Emin=-(10**9))


def to_decimal(q, digits: int) -> Decimal:
    """Correctly rounded Decimal for an int/Fraction/Decimal."""
    ctx = context(digits)
    if isinstance(q, Decimal):
        return ctx.plus(q)
    q = Fraction(q)
    return ctx.divide(Decimal(q.numerator), Decimal(q.denominator))


_SCI = re.compile(r"^\s*([+-]?\d(?:\.\d*)?e[+-]?\d+)@(\d+)\s*$")


@dataclass(frozen=True)
class BigFloat:
    """A Decimal rounded to ``precision`` significant digits."""

    value: Decimal
    precision: int

    def __post_init__(self) -> None:
        if self.precision < MIN_PRECISION:
            raise PrecisionError(f"BigFloat precision must be >= {MIN_PRECISION}")
        object.__setattr__(self, "value", context(self.precision).plus(self.value))

    @classmethod
    def from_rational(cls, q, precision: int) -> BigFloat:
        return cls(to_decimal(q, precision), precision)

    @classmethod
    def parse(cls, text: str) -> BigFloat:
        match = _SCI.match(text)
        if not match:
            raise ValueError(f"not a BigFloat literal: {text!r}")
        return cls(Decimal(match.group(1)), int(match.group(2)))

    def to_sci(self) -> str:
        """'d.ddd...e<exp>@<precision>' with exactly ``precision`` digits."""
        return f"{self.mantissa_exponent()}@{self.precision}"

    def mantissa_exponent(self, digits: int | None = None) -> str:
        digits = self.precision if digits is None else digits
        if self.value == 0:
            return f"{'0.' + '0' * (digits - 1) if digits > 1 else '0'}e+0"
        text = format(context(digits).plus(self.value), f".{digits - 1}e")
        mant, exp = text.split("e")
        return f"{mant}e{int(exp):+d}"

    def fixed(self) -> str:
        """Plain positional decimal string, no exponent."""
        return format(self.value, "f")

    def round_to(self, digits: int) -> BigFloat:
        return BigFloat(self.value, digits)

    def __float__(self) -> float:
        return float(self.value)

    def __str__(self) -> str:
        return self.to_sci()


# ---------------------------------------------------------------------------
# pi
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PiValue:
    digits: BigFloat
    certified_precision: int


def _arctan_inv(x: int, unit: int) -> tuple[int, int]:
    """unit * arctan(1/x) in fixed point, and the number of series terms."""
    x2 = x * x
    power = unit // x
    total = power
    k, sign, terms = 1, 1, 1
    while power:
        power //= x2
        k += 2
        sign = -sign
        total += sign * (power // k)
        terms += 1
    return total, terms


def _pi_machin(unit: int) -> tuple[int, int]:
    """pi * unit via 16 atan(1/5) - 4 atan(1/239), with an error bound in units.

    Each floor in the series is off by < 1 unit and the dropped tail is below
    the last (zero) term, so |error| < 16 * 2 t1 + 4 * 2 t2 units.
    """
    a, t1 = _arctan_inv(5, unit)
    b, t2 = _arctan_inv(239, unit)
    return 16 * a - 4 * b, 32 * t1 + 8 * t2


def _pi_chudnovsky(unit: int) -> int:
    # per-term truncation is amplified by the b_sum weight; carry guard digits
    guard = 10**20
    work = unit * guard
    c3_over_24 = 640320**3 // 24
    k = 1
    a_k = work
    a_sum = work
    b_sum = 0
    while a_k:
        a_k *= -(6 * k - 5) * (2 * k - 1) * (6 * k - 1)
        a_k //= k * k * k * c3_over_24
        a_sum += a_k
        b_sum += k * a_k
        k += 1
    total = 13591409 * a_sum + 545140134 * b_sum
    return (426880 * isqrt(10005 * work * work) * work // total + guard // 2) // guard


@lru_cache(maxsize=None)
def _pi_certified(digits: int) -> tuple[Decimal, int]:
    # work in fixed point with digits + guard decimals after the point
    scale = digits + guard_digits(digits)
    unit = 10**scale
    machin, err_units = _pi_machin(unit)
    chud = _pi_chudnovsky(unit)
    # decimals guaranteed by the Machin error bound
    good_decimals = scale - len(str(err_units))
    agree = scale - len(str(abs(machin - chud))) if machin != chud else scale
    certified = min(good_decimals, agree) + 1  # +1: the leading '3'
    value = context(digits).divide(Decimal(machin), Decimal(unit))
    return value, min(certified, digits)


def pi_decimal(digits: int) -> Decimal:
    """pi to ``digits`` significant digits, no upper cap (internal use)."""
    return _pi_certified(digits)[0]


def compute_pi(precision: int, maximum: int = MAX_PRECISION) -> PiValue:
    check_precision(precision, maximum)
    value, certified = _pi_certified(precision)
    return PiValue(BigFloat(value, precision), certified)


# ---------------------------------------------------------------------------
# sin
# ---------------------------------------------------------------------------


def dsin(x: Decimal, digits: int) -> Decimal:
    """sin(x) to ``digits`` significant digits (absolute error ~ 10^-digits
    for |sin x| near zero)."""
    extra = 10 + int(math.log10(abs(x) + 1)) if x else 10
    work = digits + extra
    with localcontext(context(work)):
        two_pi = 2 * pi_decimal(work)
        r = x.remainder_near(two_pi)  # |r| <= pi
        r2 = r * r
        term = r
        total = r
        k = 1
        eps = Decimal(10) ** (-work - 2)
        while abs(term) > eps:
            term = -term * r2 / ((2 * k) * (2 * k + 1))
            total += term
            k += 1
    return context(digits).plus(total)
