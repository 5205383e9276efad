from decimal import Decimal
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bernpart.bigfloat import (
    BigFloat,
    PrecisionError,
    _pi_chudnovsky,
    _pi_machin,
    compute_pi,
    dsin,
    to_decimal,
)


def test_pi_20_and_10():
    assert str(compute_pi(20).digits.value) == "3.1415926535897932385"
    assert str(compute_pi(10).digits.value) == "3.141592654"


def test_pi_certified_against_mpmath_1000():
    pv = compute_pi(1000)
    assert pv.certified_precision == 1000
    with mpmath.workdps(1020):
        ref = mpmath.nstr(mpmath.pi, 1000, strip_zeros=False)
    assert str(pv.digits.value) == ref


def test_two_pi_series_agree():
    unit = 10**300
    machin, bound = _pi_machin(unit)
    # the Chudnovsky route is good to one unit after its internal guard digits
    assert abs(machin - _pi_chudnovsky(unit)) <= bound + 1
    with mpmath.workdps(320):
        truth = int(mpmath.floor(mpmath.pi * unit))
    assert abs(_pi_chudnovsky(unit) - truth) <= 1
    assert abs(machin - truth) <= bound


def test_pi_deterministic():
    assert compute_pi(50) == compute_pi(50)


@pytest.mark.parametrize("precision", [9, 1001])
def test_pi_precision_range(precision):
    with pytest.raises(PrecisionError):
        compute_pi(precision)


def test_from_rational_is_correctly_rounded():
    bf = BigFloat.from_rational(Fraction(2, 3), 12)
    assert bf.value == Decimal("0.666666666667")
    # round-half-even on an exact tie
    assert BigFloat(Decimal("1.0000000025"), 10).value == Decimal("1.000000002")
    assert BigFloat(Decimal("1.0000000035"), 10).value == Decimal("1.000000004")


def test_sci_format():
    bf = BigFloat.from_rational(Fraction(6579736267392906, 10**16), 16)
    assert bf.to_sci() == "6.579736267392906e-1@16"
    assert BigFloat(Decimal(0), 10).to_sci() == "0.000000000e+0@10"
    assert BigFloat.from_rational(348, 10).to_sci() == "3.480000000e+2@10"


@given(st.fractions(min_value=-(10**12), max_value=10**12, max_denominator=10**6), st.integers(10, 40))
def test_sci_round_trip(q, precision):
    bf = BigFloat.from_rational(q, precision)
    again = BigFloat.parse(bf.to_sci())
    assert again == bf
    assert again.to_sci() == bf.to_sci()


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        BigFloat.parse("0.5")


@pytest.mark.parametrize("x", ["0", "1", "-2.5", "3.14159", "100", "123456.789"])
def test_dsin_against_mpmath(x):
    got = dsin(Decimal(x), 50)
    with mpmath.workdps(70):
        ref = mpmath.sin(mpmath.mpf(x))
        assert abs(mpmath.mpf(str(got)) - ref) < mpmath.mpf(10) ** -48


def test_to_decimal_passthrough():
    assert to_decimal(Decimal("1.23456789012345"), 5) == Decimal("1.2346")
