"""The triangular system 1 = M.B, its exact inverse, and the Bernoulli
partitions |B_{2m}| = sum_{n=2}^{m} b_m(n).

Rows and columns are 1-based throughout, matching the usual (m, n) labels:
``m`` is the row of M^-1 and ``n`` its column.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .exact_core import (
    RationalPolynomial,
    bernoulli,
    binomial,
    factorial,
    falling_factorial,
    zeta_ratio,
)
from .report import VerificationReport, exact_report

__all__ = [
    "TriangularMatrix",
    "PartitionRow",
    "QPolynomialFamily",
    "SingularMatrixError",
    "CertificationError",
    "m_entry",
    "build_matrix",
    "invert_triangular",
    "inverse_matrix",
    "partition_row",
    "partition_rows",
    "q_polynomials",
    "b_via_q",
    "conjecture_polynomial",
    "verify_rid2",
    "verify_partition_sum",
    "verify_exact_ratio",
    "closed_form_diagonals",
    "verify_inverse_identity",
    "verify_closed_forms",
    "verify_row_properties",
]


class SingularMatrixError(ValueError):
    """A zero on the diagonal of a triangular matrix."""


class CertificationError(RuntimeError):
    """A computed partition row does not sum to |B_{2m}|."""


@dataclass(frozen=True)
class TriangularMatrix:
    """Lower-triangular N x N block; ``rows[m-1][n-1]`` holds entry (m, n), n <= m."""

    size: int
    rows: tuple[tuple[Fraction, ...], ...]

    def entry(self, m: int, n: int) -> Fraction:
        if not (1 <= m <= self.size and 1 <= n <= self.size):
            raise IndexError(f"({m}, {n}) outside {self.size}x{self.size} block")
        return self.rows[m - 1][n - 1] if n <= m else Fraction(0)

    def __matmul__(self, other: TriangularMatrix) -> TriangularMatrix:
        if other.size != self.size:
            raise ValueError("size mismatch")
        rows = []
        for m in range(1, self.size + 1):
            rows.append(
                tuple(
                    sum(
                        (self.entry(m, k) * other.entry(k, n) for k in range(n, m + 1)),
                        Fraction(0),
                    )
                    for n in range(1, m + 1)
                )
            )
        return TriangularMatrix(self.size, tuple(rows))

    def to_lists(self) -> list[list[Fraction]]:
        return [[self.entry(m, n) for n in range(1, self.size + 1)] for m in range(1, self.size + 1)]

    @classmethod
    def identity(cls, size: int) -> TriangularMatrix:
        return cls(
            size,
            tuple(
                tuple(Fraction(int(n == m)) for n in range(1, m + 1)) for m in range(1, size + 1)
            ),
        )


def m_entry(m: int, n: int) -> int:
    """M_{m,n} = 2 (-1)^(m+1) C(2n-1, m) C(2m+1, 2n)."""
    sign = 1 if m % 2 else -1
    return 2 * sign * binomial(2 * n - 1, m) * binomial(2 * m + 1, 2 * n)


def build_matrix(size: int) -> TriangularMatrix:
    if size < 1:
        raise ValueError(f"matrix size must be >= 1, got {size}")
    rows = tuple(
        tuple(Fraction(m_entry(m, n)) for n in range(1, m + 1)) for m in range(1, size + 1)
    )
    return TriangularMatrix(size, rows)


def invert_triangular(mat: TriangularMatrix) -> TriangularMatrix:
    """Exact inverse by forward substitution, one row of the inverse at a time.

    Row m of L^-1 solves x L = e_m restricted to columns <= m; equivalently
    X[m][n] = -(sum_{k=n+1}^{m} X[m][k] L[k][n]) / L[n][n] for n < m.
    """
    size = mat.size
    for i in range(1, size + 1):
        if mat.entry(i, i) == 0:
            raise SingularMatrixError(f"zero diagonal entry at ({i}, {i})")
    rows = []
    for m in range(1, size + 1):
        x = [Fraction(0)] * m
        x[m - 1] = 1 / mat.entry(m, m)
        for n in range(m - 1, 0, -1):
            acc = Fraction(0)
            for k in range(n + 1, m + 1):
                lkn = mat.rows[k - 1][n - 1]
                if lkn:
                    acc += x[k - 1] * lkn
            x[n - 1] = -acc / mat.rows[n - 1][n - 1]
        rows.append(tuple(x))
    return TriangularMatrix(size, tuple(rows))


_INVERSE: Optional[TriangularMatrix] = None


def inverse_matrix(size: int) -> TriangularMatrix:
    """M^-1 restricted to the leading size x size block.

    The leading block of a lower-triangular inverse is the inverse of the
    leading block, so one memoized large inverse serves every smaller request.
    """
    global _INVERSE
    inv = _INVERSE
    if inv is None or inv.size < size:
        inv = invert_triangular(build_matrix(size))
        _INVERSE = inv
    if inv.size == size:
        return inv
    return TriangularMatrix(size, inv.rows[:size])


# ---------------------------------------------------------------------------
# Partition rows
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PartitionRow:
    m: int
    terms: tuple[tuple[int, Fraction], ...]
    certified_sum: Fraction

    def values(self) -> list[Fraction]:
        return [b for _, b in self.terms]

    def term(self, n: int) -> Fraction:
        if not 2 <= n <= self.m:
            raise IndexError(f"column {n} outside 2..{self.m}")
        return self.terms[n - 2][1]


def partition_row(m: int, inverse: Optional[TriangularMatrix] = None) -> PartitionRow:
    """Unsigned entries b_m(n), n = 2..m, of row m of M^-1.

    m = 1 is rejected: |B_2| = 1/6 has no partition, use ``bernoulli(2)``.
    """
    if m < 2:
        raise ValueError(f"partitions start at m = 2 (|B_2| = bernoulli(2)); got m = {m}")
    inv = inverse if inverse is not None and inverse.size >= m else inverse_matrix(m)
    terms = tuple((n, abs(inv.entry(m, n))) for n in range(2, m + 1))
    total = sum((b for _, b in terms), Fraction(0))
    target = abs(bernoulli(2 * m))
    if total != target:
        raise CertificationError(f"row {m}: sum {total} != |B_{2 * m}| = {target}")
    return PartitionRow(m, terms, total)


def partition_rows(m_values: Sequence[int]) -> list[PartitionRow]:
    if not m_values:
        return []
    inv = inverse_matrix(max(m_values))
    return [partition_row(m, inv) for m in m_values]


# ---------------------------------------------------------------------------
# q-polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QPolynomialFamily:
    """q_0..q_L as polynomials in n, plus the rule q_{-1}(n) = 1/(n-1)."""

    polys: tuple[RationalPolynomial, ...]

    @property
    def max_order(self) -> int:
        return len(self.polys) - 1

    def __getitem__(self, l: int) -> RationalPolynomial:
        if l < 0:
            raise IndexError("q_{-1} is not a polynomial; use evaluate(-1, n)")
        return self.polys[l]

    def evaluate(self, l: int, n) -> Fraction:
        if l == -1:
            return Fraction(1) / (n - 1)
        return self.polys[l](n)


def q_polynomials(max_order: int, start: Optional[QPolynomialFamily] = None) -> QPolynomialFamily:
    """Iterate

        q_l(n) = (-1)^l (n-l-3)_l / (2l+3)!
               + sum_{j<l} (-1)^(l+j+1) (n+j-l-1)_(l-j) / (2l+1-2j)! q_j(n+j-l)

    where (a)_k is the falling factorial with k factors. Writing the factorial
    ratios as falling factorials keeps every q_l a polynomial valid for all n.
    Passing ``start`` extends an existing family instead of rebuilding it.
    """
    if max_order < 0:
        raise ValueError(f"max_order must be >= 0, got {max_order}")
    polys: list[RationalPolynomial] = list(start.polys) if start is not None else []
    for l in range(len(polys), max_order + 1):
        sign = 1 if l % 2 == 0 else -1
        q = RationalPolynomial.falling(-l - 3, l, "n").scale(Fraction(sign, factorial(2 * l + 3)))
        for j in range(l):
            sign_j = 1 if (l + j + 1) % 2 == 0 else -1
            ff = RationalPolynomial.falling(j - l - 1, l - j, "n")
            q = q + (ff * polys[j].shift(j - l)).scale(Fraction(sign_j, factorial(2 * l + 1 - 2 * j)))
        polys.append(q)
    return QPolynomialFamily(tuple(polys[: max_order + 1]))


_Q_FAMILY: Optional[QPolynomialFamily] = None


def _q_family(order: int) -> QPolynomialFamily:
    global _Q_FAMILY
    fam = _Q_FAMILY
    if fam is None or fam.max_order < order:
        fam = q_polynomials(max(order, 8), start=fam)
        _Q_FAMILY = fam
    return fam


def b_via_q(m: int, n: int) -> Fraction:
    """b_m(n) = m! n! / (2n+1)! (n-1) q_{m-1-n}(m)."""
    if not 2 <= n <= m:
        raise ValueError(f"b_via_q needs 2 <= n <= m, got m={m}, n={n}")
    l = m - 1 - n
    q = Fraction(1, m - 1) if l == -1 else _q_family(l).evaluate(l, m)
    return Fraction(factorial(m) * factorial(n), factorial(2 * n + 1)) * (n - 1) * q


# ---------------------------------------------------------------------------
# Exact verifiers
# ---------------------------------------------------------------------------


def conjecture_polynomial(n: int) -> RationalPolynomial:
    """p_n(x) = 1/(4n^2-1) sum_{k=0}^{floor(n/2)-1} (-4)^k x^(k+1) / (2k+1)!
    * Gamma(n-1) Gamma(2n-2-2k) / (Gamma(n-1-2k) Gamma(2n-2)).

    The Gamma ratio is (n-2)_(2k) / (2n-3)_(2k) in falling factorials.
    p_1 is the zero polynomial.
    """
    if n < 1:
        raise ValueError(f"p_n needs n >= 1, got {n}")
    coeffs = [Fraction(0)] * (n // 2 + 1)
    for k in range(n // 2):
        ratio = Fraction(falling_factorial(n - 2, 2 * k), falling_factorial(2 * n - 3, 2 * k))
        coeffs[k + 1] = Fraction((-4) ** k, factorial(2 * k + 1)) * ratio / (4 * n * n - 1)
    return RationalPolynomial(coeffs, "x")


def verify_rid2(n: int) -> VerificationReport:
    """(-1)^(n+1) (4n+2) sum_k (2n)!/(n! k! (n-k)!) B_{n+k+1}/(n+k+1) == 1."""
    if n < 1:
        raise ValueError(f"verify_rid2 needs n >= 1, got {n}")
    total = Fraction(0)
    for k in range(n + 1):
        trinomial = factorial(2 * n) // (factorial(n) * factorial(k) * factorial(n - k))
        total += trinomial * bernoulli(n + k + 1) / (n + k + 1)
    sign = 1 if n % 2 else -1
    value = sign * (4 * n + 2) * total
    return exact_report("rid2", {"n": n}, value, Fraction(1))


def verify_partition_sum(m: int, inverse: Optional[TriangularMatrix] = None) -> VerificationReport:
    inv = inverse if inverse is not None and inverse.size >= m else inverse_matrix(m)
    total = sum((abs(inv.entry(m, n)) for n in range(2, m + 1)), Fraction(0))
    return exact_report("partition-sum", {"m": m}, total, abs(bernoulli(2 * m)))


def verify_exact_ratio(
    m: int, n: int, inverse: Optional[TriangularMatrix] = None
) -> VerificationReport:
    """b_m(n)/|B_{2m}| equals p_n with x^j -> pi^(2j) zeta(2m-2j)/zeta(2m)."""
    if not 2 <= n <= m:
        raise ValueError(f"verify_exact_ratio needs 2 <= n <= m, got m={m}, n={n}")
    p = conjecture_polynomial(n)
    predicted = sum(
        (c * zeta_ratio(m, j) for j, c in enumerate(p.coefficients) if c),
        Fraction(0),
    )
    inv = inverse if inverse is not None and inverse.size >= m else inverse_matrix(m)
    actual = abs(inv.entry(m, n)) / abs(bernoulli(2 * m))
    return exact_report("exact-ratio", {"m": m, "n": n}, predicted, actual)


def closed_form_diagonals(m: int) -> tuple[Optional[Fraction], Optional[Fraction], Optional[Fraction]]:
    """|M^-1| on the diagonal and the first two sub-diagonals of row m.

    Entries outside their range of validity (m < 2, m < 3) come back as None.
    """
    if m < 1:
        raise ValueError(f"row index must be >= 1, got {m}")
    f = factorial
    diag = Fraction(f(m) ** 2, f(2 * m + 1))
    first = Fraction(m - 2, 6) * Fraction(f(m) * f(m - 1), f(2 * m - 1)) if m >= 2 else None
    second = (
        Fraction(7, 360) * (m - Fraction(8, 7)) * (m - 3) * Fraction(f(m) * f(m - 2), f(2 * m - 3))
        if m >= 3
        else None
    )
    return diag, first, second


def verify_inverse_identity(size: int) -> VerificationReport:
    """M . M^-1 == I on the leading size x size block."""
    product = build_matrix(size) @ inverse_matrix(size)
    ident = TriangularMatrix.identity(size)
    bad = [
        (m, n)
        for m in range(1, size + 1)
        for n in range(1, m + 1)
        if product.entry(m, n) != ident.entry(m, n)
    ]
    return VerificationReport(
        "inverse-identity", {"N": size, "violations": bad}, not bad, "M . M^-1", "I", str(len(bad))
    )


def verify_closed_forms(max_m: int) -> VerificationReport:
    inv = inverse_matrix(max_m)
    bad = []
    for m in range(1, max_m + 1):
        for offset, value in enumerate(closed_form_diagonals(m)):
            if value is not None and abs(inv.entry(m, m - offset)) != value:
                bad.append([m, offset])
    return VerificationReport(
        "closed-form-diagonals",
        {"max_m": max_m, "violations": bad},
        not bad,
        "|M^-1| diagonal and sub-diagonals",
        "closed forms",
        str(len(bad)),
    )


def verify_row_properties(max_m: int = 40) -> list[VerificationReport]:
    """Sign coherence of M^-1 rows, strictly falling terms, subtotal dominance
    and 7 b_m(3) = 3 b_m(2), for every row up to ``max_m``."""
    if max_m < 2:
        raise ValueError(f"max_m must be >= 2, got {max_m}")
    inv = inverse_matrix(max_m)
    sign_bad, falling_bad, subtotal_bad, ratio_bad = [], [], [], []
    for m in range(1, max_m + 1):
        sign = 1 if m % 2 else -1
        if any(v * sign < 0 for v in inv.rows[m - 1]):
            sign_bad.append(m)
        if m < 2:
            continue
        b = [abs(inv.entry(m, n)) for n in range(2, m + 1)]
        if not all(x > y > 0 for x, y in zip(b, b[1:])) or b[-1] <= 0:
            falling_bad.append(m)
        tail = Fraction(0)
        for i in range(len(b) - 1, 0, -1):
            tail += b[i]
            if not b[i - 1] > tail:
                subtotal_bad.append([m, i + 1])
                break
        if m >= 3 and 7 * b[1] != 3 * b[0]:
            ratio_bad.append(m)

    def report(check: str, bad: list, lhs: str, rhs: str) -> VerificationReport:
        return VerificationReport(
            check, {"max_m": max_m, "violations": bad}, not bad, lhs, rhs, str(len(bad))
        )

    return [
        report("monotone:row-sign", sign_bad, "sign of M^-1 row m entries", "(-1)^(m+1)"),
        report("monotone:terms-decreasing", falling_bad, "b_m(2) > ... > b_m(m)", "> 0"),
        report("monotone:subtotal-dominance", subtotal_bad, "b_m(n)", "> sum_{j>n} b_m(j)"),
        report("monotone:three-sevenths", ratio_bad, "7 b_m(3)", "3 b_m(2)"),
    ]
