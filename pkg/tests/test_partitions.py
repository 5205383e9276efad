from fractions import Fraction as F
from math import factorial

import pytest

from bernpart.exact_core import bernoulli
from bernpart.partitions import (
    CertificationError,
    SingularMatrixError,
    TriangularMatrix,
    b_via_q,
    build_matrix,
    closed_form_diagonals,
    conjecture_polynomial,
    inverse_matrix,
    invert_triangular,
    partition_row,
    partition_rows,
    q_polynomials,
    verify_closed_forms,
    verify_exact_ratio,
    verify_inverse_identity,
    verify_partition_sum,
    verify_rid2,
    verify_row_properties,
)

N_TEST = 40

REFERENCE_M = [
    [6, 0, 0, 0, 0, 0],
    [0, -30, 0, 0, 0, 0],
    [0, 70, 140, 0, 0, 0],
    [0, 0, -840, -630, 0, 0],
    [0, 0, 924, 6930, 2772, 0],
    [0, 0, 0, -18018, -48048, -12012],
]

REFERENCE_M_INV = [
    [F(1, 6), 0, 0, 0, 0, 0],
    [0, F(-1, 30), 0, 0, 0, 0],
    [0, F(1, 60), F(1, 140), 0, 0, 0],
    [0, F(-1, 45), F(-1, 105), F(-1, 630), 0, 0],
    [0, F(1, 20), F(3, 140), F(1, 252), F(1, 2772), 0],
    [0, F(-1, 6), F(-1, 14), F(-17, 1260), F(-1, 693), F(-1, 12012)],
]


def test_matrix_matches_display():
    assert build_matrix(6).to_lists() == REFERENCE_M
    assert build_matrix(6).entry(6, 4) == -18018
    assert build_matrix(6).entry(2, 1) == 0


def test_inverse_matches_display():
    inv = invert_triangular(build_matrix(6))
    assert inv.to_lists() == REFERENCE_M_INV
    assert inv.entry(3, 2) == F(1, 60)
    assert inv.entry(6, 6) == F(-1, 12012)


def test_inverse_of_identity():
    ident = TriangularMatrix.identity(5)
    assert invert_triangular(ident) == ident


def test_inverse_of_generic_lower_triangular():
    rows = ((F(2),), (F(1), F(3)), (F(-4), F(5), F(7)))
    mat = TriangularMatrix(3, rows)
    assert (mat @ invert_triangular(mat)) == TriangularMatrix.identity(3)


def test_singular_diagonal_is_reported():
    mat = TriangularMatrix(2, ((F(1),), (F(3), F(0))))
    with pytest.raises(SingularMatrixError):
        invert_triangular(mat)


def test_matrix_times_inverse_is_identity():
    assert verify_inverse_identity(N_TEST).passed


def test_inverse_block_caching_is_consistent():
    big = inverse_matrix(N_TEST)
    small = invert_triangular(build_matrix(12))
    assert inverse_matrix(12) == small
    assert big.rows[:12] == small.rows


class TestPartitionRow:
    def test_m3(self):
        row = partition_row(3)
        assert row.terms == ((2, F(1, 60)), (3, F(1, 140)))
        assert row.certified_sum == F(1, 42)

    def test_m2_unpartitioned(self):
        row = partition_row(2)
        assert row.terms == ((2, F(1, 30)),)
        assert row.certified_sum == F(1, 30)

    def test_m10_term(self):
        assert partition_row(10).term(4) == F(750167, 26460)

    def test_m1_rejected_with_pointer(self):
        with pytest.raises(ValueError, match="bernoulli"):
            partition_row(1)

    def test_sums_to_bernoulli(self):
        for row in partition_rows(list(range(2, N_TEST + 1))):
            assert row.certified_sum == abs(bernoulli(2 * row.m))
            assert verify_partition_sum(row.m).passed

    def test_certification_failure_is_raised(self):
        rows = list(inverse_matrix(5).rows)
        rows[4] = tuple(v * 2 for v in rows[4])
        with pytest.raises(CertificationError):
            partition_row(5, TriangularMatrix(5, tuple(rows)))


class TestQPolynomials:
    def test_explicit_examples(self):
        fam = q_polynomials(2)
        assert fam[0].coefficients == (F(1, 6),)
        assert fam[1].coefficients == (F(-1, 45), F(7, 360))
        assert fam[2].coefficients == (F(1, 315), F(-89, 15120), F(31, 15120))
        assert fam.evaluate(-1, 7) == F(1, 6)

    def test_degrees(self):
        fam = q_polynomials(N_TEST)
        assert [fam[l].degree for l in range(N_TEST + 1)] == list(range(N_TEST + 1))

    def test_extension_matches_fresh_build(self):
        assert q_polynomials(9, start=q_polynomials(4)) == q_polynomials(9)

    def test_agrees_with_literal_factorials(self):
        # evaluate the recursion with factorials directly wherever all are defined
        fam = q_polynomials(8)

        def literal(l, n):
            total = F((-1) ** l * factorial(n - l - 3), factorial(2 * l + 3) * factorial(n - 2 * l - 3))
            for j in range(l):
                total += F(
                    (-1) ** (l + j + 1) * factorial(n + j - l - 1),
                    factorial(2 * l + 1 - 2 * j) * factorial(n + 2 * j - 2 * l - 1),
                ) * literal(j, n + j - l)
            return total

        for l in range(9):
            for n in range(2 * l + 3, 2 * l + 12):
                assert fam[l](n) == literal(l, n), (l, n)


class TestBViaQ:
    def test_examples(self):
        assert b_via_q(4, 2) == F(1, 45)
        assert b_via_q(5, 5) == F(1, 2772)
        assert b_via_q(6, 5) == F(1, 693)

    def test_two_paths_agree(self):
        inv = inverse_matrix(N_TEST)
        for m in range(2, N_TEST + 1):
            for n in range(2, m + 1):
                assert b_via_q(m, n) == abs(inv.entry(m, n)), (m, n)

    @pytest.mark.parametrize("m,n", [(3, 1), (3, 4), (1, 1)])
    def test_out_of_range(self, m, n):
        with pytest.raises(ValueError):
            b_via_q(m, n)


class TestRid2:
    def test_n1_by_hand(self):
        # 6 (2 B_2/2 + 2 B_3/3), B_2 = 1/6, B_3 = 0
        assert 6 * (2 * F(1, 6) / 2 + 0) == 1
        assert verify_rid2(1).passed

    def test_n2_by_hand(self):
        # -(10) sum_k 4!/(2! k! (2-k)!) B_{3+k}/(3+k) with only B_4 = -1/30 nonzero
        assert -10 * (12 * F(-1, 30) / 4) == 1
        assert verify_rid2(2).passed

    def test_up_to_100(self):
        for n in range(1, 101):
            r = verify_rid2(n)
            assert r.passed and r.residual == "0", n

    def test_report_fields(self):
        r = verify_rid2(3)
        assert r.lhs == "1" and r.rhs == "1"


class TestExactRatio:
    def test_examples(self):
        assert verify_exact_ratio(2, 2).passed
        r = verify_exact_ratio(10, 5)
        assert r.passed and F(r.rhs) == F(6583, 2079) / F(174611, 330)
        r = verify_exact_ratio(7, 3)
        assert r.passed and F(r.rhs) == F(691, 2100) / F(7, 6)

    def test_all_up_to_40(self):
        inv = inverse_matrix(N_TEST)
        for m in range(2, N_TEST + 1):
            for n in range(2, m + 1):
                assert verify_exact_ratio(m, n, inv).passed, (m, n)


class TestClosedForms:
    def test_examples(self):
        d, first, _ = closed_form_diagonals(6)
        assert d == F(1, 12012)
        assert first == F(1, 693)
        # (1/6)(1)(3! 2!)/5! = 12/720
        assert closed_form_diagonals(3)[1] == F(12, 720) == F(1, 60)

    def test_below_validity(self):
        assert closed_form_diagonals(1)[1:] == (None, None)
        assert closed_form_diagonals(2)[2] is None

    def test_agree_with_inverse(self):
        assert verify_closed_forms(N_TEST).passed


def test_row_properties():
    for r in verify_row_properties(N_TEST):
        assert r.passed, r


def test_conjecture_polynomial_small():
    assert conjecture_polynomial(1).is_zero()
    assert conjecture_polynomial(2).coefficients == (0, F(1, 15))
    assert conjecture_polynomial(3).coefficients == (0, F(1, 35))
