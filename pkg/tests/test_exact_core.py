import threading
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bernpart.exact_core import (
    BernoulliCache,
    RationalPolynomial,
    bernoulli,
    bernoulli_akiyama_tanigawa,
    binomial,
    factorial,
    format_rational,
    parse_rational,
    poly_arith,
    zeta_ratio,
)

fractions_st = st.fractions(min_value=-50, max_value=50, max_denominator=60)
polys_st = st.lists(fractions_st, max_size=6).map(RationalPolynomial)


def test_factorial_small():
    assert factorial(0) == 1
    assert factorial(5) == 120


def test_factorial_21_against_repeated_multiplication():
    acc = 1
    for i in range(2, 22):
        acc *= i
    assert acc == 51090942171709440000
    assert factorial(21) == 51090942171709440000


def test_factorial_rejects_negative():
    with pytest.raises(ValueError):
        factorial(-1)


def pascal_row(a):
    row = [1]
    for _ in range(a):
        row = [1] + [row[i] + row[i + 1] for i in range(len(row) - 1)] + [1]
    return row


def test_binomial_examples():
    assert binomial(3, 2) == 3
    assert binomial(1, 1) == 1
    assert pascal_row(7)[4] == 35
    assert binomial(7, 4) == 35


@pytest.mark.parametrize("a", range(0, 15))
def test_binomial_matches_pascal(a):
    row = pascal_row(a)
    for b in range(-2, a + 3):
        assert binomial(a, b) == (row[b] if 0 <= b <= a else 0)


class TestBernoulli:
    def test_known_values(self):
        assert bernoulli(12) == Fraction(-691, 2730)
        assert bernoulli(20) == Fraction(-174611, 330)
        assert bernoulli(7) == 0

    def test_conventions(self):
        assert bernoulli(0) == 1
        assert bernoulli(1) == Fraction(-1, 2)
        assert bernoulli(2) == Fraction(1, 6)

    @pytest.mark.parametrize("n", range(1, 61))
    def test_sign_pattern(self, n):
        assert bernoulli(2 * n) * (-1) ** (n + 1) > 0
        assert bernoulli(2 * n + 1) == 0

    def test_two_algorithms_agree_to_120(self):
        for k in range(0, 121):
            assert bernoulli(k) == bernoulli_akiyama_tanigawa(k), k

    def test_against_mpmath(self):
        with mpmath.workdps(40):
            for k in (2, 10, 30, 50):
                exact = bernoulli(k)
                ref = mpmath.bernoulli(k)
                assert abs(mpmath.mpf(exact.numerator) / exact.denominator / ref - 1) < mpmath.mpf(10) ** -30

    def test_cache_values_are_append_only(self):
        cache = BernoulliCache()
        first = cache(10)
        snapshot = dict(cache.values)
        cache(40)
        for key, value in snapshot.items():
            assert cache.values[key] is value
        assert cache(10) is first

    def test_concurrent_readers_agree(self):
        cache = BernoulliCache()
        results = {}

        def work(i):
            results[i] = [cache(k) for k in range(0, 100 + i, 2)]

        threads = [threading.Thread(target=work, args=(i,)) for i in range(8)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        for vals in results.values():
            assert vals == [bernoulli(k) for k in range(0, 2 * len(vals), 2)]

    def test_negative_index(self):
        with pytest.raises(ValueError):
            bernoulli(-1)


class TestZetaRatio:
    def test_closed_forms(self):
        # zeta(2) = pi^2/6, zeta(4) = pi^4/90, zeta(6) = pi^6/945
        assert zeta_ratio(2, 1) == 15
        assert zeta_ratio(3, 1) == Fraction(21, 2)
        assert zeta_ratio(7, 0) == 1

    @pytest.mark.parametrize("m,k", [(2, 1), (5, 2), (8, 7), (12, 3)])
    def test_against_numeric_zeta(self, m, k):
        with mpmath.workdps(40):
            expected = mpmath.pi ** (2 * k) * mpmath.zeta(2 * m - 2 * k) / mpmath.zeta(2 * m)
            q = zeta_ratio(m, k)
            assert abs(mpmath.mpf(q.numerator) / q.denominator / expected - 1) < mpmath.mpf(10) ** -30

    @pytest.mark.parametrize("m,k", [(3, 3), (3, -1), (0, 0)])
    def test_rejects_out_of_range(self, m, k):
        with pytest.raises(ValueError):
            zeta_ratio(m, k)

    def test_telescoping(self):
        for m in range(1, 31):
            for k in range(m):
                for j in range(m - k):
                    assert zeta_ratio(m, k + j) == zeta_ratio(m, k) * zeta_ratio(m - k, j)


class TestRationalPolynomial:
    def test_normalizes_trailing_zeros(self):
        p = RationalPolynomial([1, 2, 0, 0])
        assert p.coefficients == (1, 2)
        assert p.degree == 1
        assert RationalPolynomial([0, 0]).is_zero()
        assert RationalPolynomial().degree == float("-inf")

    def test_shift_of_q1(self):
        q1 = RationalPolynomial([Fraction(-1, 45), Fraction(7, 360)], "n")
        shifted = poly_arith(q1, -1, "shift_argument")
        # 7(n-1)/360 - 1/45 expanded binomially
        assert shifted.coefficients == (Fraction(-7, 360) - Fraction(1, 45), Fraction(7, 360))
        for n in range(4):
            assert shifted(n) == q1(n - 1)

    def test_identities(self):
        x = RationalPolynomial.monomial(1)
        p = RationalPolynomial([1, Fraction(1, 3), 5])
        assert poly_arith(p, RationalPolynomial(), "add") == p
        assert poly_arith(x, x, "mul") == RationalPolynomial.monomial(2)
        assert poly_arith(p, p, "sub").is_zero()
        assert poly_arith(p, Fraction(2), "scale") == p + p
        with pytest.raises(ValueError):
            poly_arith(p, p, "div")

    def test_str(self):
        p = RationalPolynomial([0, Fraction(1, 63), Fraction(-1, 945)])
        assert str(p) == "x/63 - x^2/945"
        assert str(RationalPolynomial([Fraction(-2, 3)])) == "-2/3"
        assert str(RationalPolynomial()) == "0"

    @given(polys_st, polys_st, fractions_st)
    def test_ring_ops_agree_with_evaluation(self, p, q, v):
        assert (p + q)(v) == p(v) + q(v)
        assert (p - q)(v) == p(v) - q(v)
        assert (p * q)(v) == p(v) * q(v)

    @given(polys_st, fractions_st, fractions_st)
    @settings(max_examples=60)
    def test_shift_is_a_group_action(self, p, c, d):
        assert p.shift(c).shift(d) == p.shift(c + d)
        assert p.shift(0) == p

    @given(polys_st, fractions_st, fractions_st)
    def test_shift_evaluates_at_offset(self, p, c, v):
        assert p.shift(c)(v) == p(v + c)

    def test_falling(self):
        f = RationalPolynomial.falling(-2, 3, "n")
        for n in range(-3, 8):
            assert f(n) == (n - 2) * (n - 3) * (n - 4)
        assert RationalPolynomial.falling(5, 0) == 1


@given(st.fractions(max_denominator=10**9))
def test_fraction_serialization_round_trip(q):
    text = format_rational(q)
    assert parse_rational(text) == q
    if q.denominator == 1:
        assert "/" not in text


def test_fraction_serialization_examples():
    assert format_rational(Fraction(-691, 2730)) == "-691/2730"
    assert format_rational(Fraction(6, 1)) == "6"
    assert format_rational(Fraction(2, -4)) == "-1/2"
