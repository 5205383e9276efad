"""Large-m behaviour of the partitions: the ratios a(n) = p_n(pi^2), their
difference equation, Bessel closed form, the asymptotic approximant of
b_m(n), convergence of the ratios, sum-to-unity, and the sinc identities.

Polynomial identities are checked exactly over the rationals; anything that
needs pi goes through Decimal at an explicit working precision.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from . import _kernels
from .bigfloat import (
    BigFloat,
    PiValue,
    check_precision,
    compute_pi,
    context,
    dsin,
    guard_digits,
    pi_decimal,
    to_decimal,
)
from .exact_core import RationalPolynomial, factorial
from .partitions import conjecture_polynomial, partition_rows
from .report import VerificationReport, exact_report

__all__ = [
    "PnFamily",
    "SincCheckConfig",
    "compute_pi",
    "pn_polynomials",
    "pn_footnote_polynomial",
    "a_ratio",
    "verify_difference_equation",
    "verify_footnote_form",
    "bessel_poly_t",
    "verify_bessel_closed_form",
    "approximant",
    "ratio_convergence",
    "sum_to_unity",
    "verify_sinc_identity",
    "verify_sinc_limit",
    "verify_ratio_monotone",
    "verify_a_ratio_decreasing",
    "verify_approximant_error_trend",
    "verify_sum_unity_decreasing",
    "DEFAULT_PRECISION",
    "PiValue",
]

DEFAULT_PRECISION = 60
X = RationalPolynomial.monomial(1)


# ---------------------------------------------------------------------------
# p_n polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PnFamily:
    """p_1..p_N in x; ``family[n]`` is p_n."""

    polys: tuple[RationalPolynomial, ...]

    @property
    def size(self) -> int:
        return len(self.polys)

    def __getitem__(self, n: int) -> RationalPolynomial:
        if not 1 <= n <= len(self.polys):
            raise IndexError(f"p_{n} outside 1..{len(self.polys)}")
        return self.polys[n - 1]


def pn_polynomials(count: int) -> PnFamily:
    if count < 1:
        raise ValueError(f"need at least p_1, got count={count}")
    return PnFamily(tuple(conjecture_polynomial(n) for n in range(1, count + 1)))


def pn_footnote_polynomial(n: int) -> RationalPolynomial:
    """The product form

        1/(4n^2-1) sum_{k=0}^{floor((n-1)/2)} (-2)^k x^(k+1) / (2k+1)!
                    prod_{l=1}^{k} (n-k-1-l) / (2n-1-2l)
    """
    coeffs = [Fraction(0)] * ((n - 1) // 2 + 2)
    for k in range((n - 1) // 2 + 1):
        prod = Fraction(1)
        for l in range(1, k + 1):
            prod *= Fraction(n - k - 1 - l, 2 * n - 1 - 2 * l)
        coeffs[k + 1] = Fraction((-2) ** k, factorial(2 * k + 1)) * prod / (4 * n * n - 1)
    return RationalPolynomial(coeffs)


def verify_difference_equation(count: int) -> VerificationReport:
    """(2n+1) p_n = (2n-3) p_{n-1} - x/(2n-1) p_{n-2} for 3 <= n <= count,
    from p_1 = 0 and p_2 = x/15. Reports the first failing n, if any."""
    if count < 3:
        raise ValueError(f"difference equation needs count >= 3, got {count}")
    fam = pn_polynomials(count)
    init = exact_report("difference-eq:init", {"n": 2}, fam[2], X.scale(Fraction(1, 15)))
    if not fam[1].is_zero() or not init:
        return VerificationReport(
            "difference-eq", {"N": count, "failed_n": 2}, False, init.lhs, init.rhs, init.residual
        )
    for n in range(3, count + 1):
        lhs = fam[n].scale(2 * n + 1)
        rhs = fam[n - 1].scale(2 * n - 3) - (X * fam[n - 2]).scale(Fraction(1, 2 * n - 1))
        if lhs != rhs:
            return exact_report("difference-eq", {"N": count, "failed_n": n}, lhs, rhs)
    return VerificationReport(
        "difference-eq",
        {"N": count},
        True,
        "(2n+1) p_n(x)",
        "(2n-3) p_{n-1}(x) - x/(2n-1) p_{n-2}(x)",
        "0",
    )


def verify_footnote_form(count: int) -> VerificationReport:
    if count < 2:
        raise ValueError(f"footnote check needs count >= 2, got {count}")
    for n in range(2, count + 1):
        r = exact_report("footnote", {"N": count, "n": n}, conjecture_polynomial(n), pn_footnote_polynomial(n))
        if not r:
            return r
    return VerificationReport("footnote", {"N": count}, True, "gamma-ratio sum", "product-form sum", "0")


# ---------------------------------------------------------------------------
# Bessel closed form
# ---------------------------------------------------------------------------


def bessel_poly_t(n: int) -> RationalPolynomial:
    """t_n(x) with t_n(pi^2) = pi (2 pi)^n j_{n-1}(pi).

    The spherical-Bessel recurrence j_{l+1} = (2l+1)/z j_l - j_{l-1} at z = pi
    becomes t_{n+1} = 2(2n-1) t_n - 4 x t_{n-1}; j_0(pi) = 0 and j_1(pi) = 1/pi
    give t_1 = 0, t_2 = 4x.
    """
    if n < 1:
        raise ValueError(f"t_n needs n >= 1, got {n}")
    prev, cur = RationalPolynomial(), X.scale(4)
    if n == 1:
        return prev
    for k in range(2, n):
        prev, cur = cur, cur.scale(2 * (2 * k - 1)) - (X * prev).scale(4)
    return cur


def verify_bessel_closed_form(count: int) -> VerificationReport:
    """n!/(2n+1)! t_n(x) == p_n(x) for 2 <= n <= count, coefficient-wise."""
    if count < 2:
        raise ValueError(f"Bessel check needs count >= 2, got {count}")
    for n in range(2, count + 1):
        lhs = bessel_poly_t(n).scale(Fraction(factorial(n), factorial(2 * n + 1)))
        r = exact_report("bessel-poly", {"N": count, "n": n}, lhs, conjecture_polynomial(n))
        if not r:
            return r
    return VerificationReport("bessel-poly", {"N": count}, True, "n!/(2n+1)! t_n(x)", "p_n(x)", "0")


# ---------------------------------------------------------------------------
# numeric evaluation at x = pi^2
# ---------------------------------------------------------------------------


def _horner_at_pi2(poly: RationalPolynomial, work: int) -> tuple[Decimal, Decimal]:
    """(p(pi^2), sum |c_k| pi^(2k)) in a ``work``-digit context."""
    ctx = context(work)
    pi = pi_decimal(work + 5)
    with localcontext(ctx):
        x = pi * pi
        val = Decimal(0)
        mag = Decimal(0)
        for c in reversed(poly.coefficients):
            d = to_decimal(c, work)
            val = val * x + d
            mag = mag * x + abs(d)
    return val, mag


def _error_bound(poly: RationalPolynomial, mag: Decimal, work: int) -> Decimal:
    return mag * (len(poly.coefficients) + 4) * Decimal(10) ** (1 - work)


@lru_cache(maxsize=None)
def _pn_at_pi2(n: int, digits: int) -> Decimal:
    """p_n(pi^2) with relative error below 10^-(digits+2).

    The alternating coefficients cancel heavily for large n, so the working
    precision grows until the Horner error bound clears the result.
    """
    poly = conjecture_polynomial(n)
    work = digits + guard_digits(digits)
    for _ in range(50):
        val, mag = _horner_at_pi2(poly, work)
        err = _error_bound(poly, mag, work)
        if val != 0 and err <= abs(val) * Decimal(10) ** (-digits - 2):
            return val
        lost = int(math.ceil((mag / abs(val)).log10())) if val != 0 else work
        work += max(lost, guard_digits(work))
    raise ArithmeticError(f"p_{n}(pi^2) did not resolve")  # pragma: no cover


def a_ratio(n: int, precision: int = DEFAULT_PRECISION) -> BigFloat:
    """a(n) = p_n(pi^2), relative error < 10^(1-precision)."""
    if n < 2:
        raise ValueError(f"a(n) needs n >= 2, got {n}")
    check_precision(precision)
    return BigFloat(_pn_at_pi2(n, precision), precision)


def approximant(m: int, n: int, precision: int = DEFAULT_PRECISION) -> BigFloat:
    """Large-m estimate of b_m(n): 2 (2m)! (2 pi)^(-2m) p_n(pi^2).

    This is (2m)! n!/(2n+1)! (2pi)^(n-2m) sqrt(2) pi J_{n-1/2}(pi) after
    J_{n-1/2}(pi) = sqrt(2) j_{n-1}(pi) and the t_n closed form.
    """
    if m < 2 or not 2 <= n <= m:
        raise ValueError(f"approximant needs 2 <= n <= m, got m={m}, n={n}")
    check_precision(precision)
    work = precision + guard_digits(precision)
    a = _pn_at_pi2(n, work)
    with localcontext(context(work)):
        two_pi = 2 * pi_decimal(work)
        val = 2 * Decimal(factorial(2 * m)) * a / two_pi ** (2 * m)
    return BigFloat(val, precision)


def ratio_convergence(n: int, m_max: int, precision: int = DEFAULT_PRECISION) -> list[tuple[int, BigFloat]]:
    """[(m, b_m(n)/|B_{2m}|)] for m = n..m_max, exact ratios rounded once."""
    if n < 2 or m_max < n:
        raise ValueError(f"need n >= 2 and m_max >= n, got n={n}, m_max={m_max}")
    check_precision(precision)
    rows = partition_rows(list(range(n, m_max + 1)))
    return [
        (row.m, BigFloat.from_rational(row.term(n) / row.certified_sum, precision)) for row in rows
    ]


def _sci(value: Decimal, digits: int = 10) -> str:
    return BigFloat(value, max(digits, 10)).mantissa_exponent(digits)


def sum_to_unity(count: int, precision: int = DEFAULT_PRECISION) -> VerificationReport:
    """1 - sum_{n=2}^{count} p_n(pi^2).

    Passes when the residual is resolved above the rounding error bound, is
    positive, and is at most twice the next term a(count+1) (the tail is
    dominated by its first term). An unresolved residual is reported with
    ``resolved: False``.
    """
    if count < 2:
        raise ValueError(f"sum_to_unity needs count >= 2, got {count}")
    if precision < 30:
        raise ValueError(f"sum_to_unity needs precision >= 30, got {precision}")
    check_precision(precision)
    work = precision + guard_digits(precision)
    total = Decimal(0)
    bound = Decimal(0)
    ctx = context(work)
    for n in range(2, count + 1):
        poly = conjecture_polynomial(n)
        val, mag = _horner_at_pi2(poly, work)
        total = ctx.add(total, val)
        bound += _error_bound(poly, mag, work) + Decimal(10) ** (-work)
    residual = ctx.subtract(Decimal(1), total)
    resolved = abs(residual) > 10 * bound
    next_term = _pn_at_pi2(count + 1, 20)
    tolerance = 2 * next_term
    sig = 10
    if resolved:
        sig = max(10, min(precision, int((abs(residual) / bound).log10())))
    passed = bool(resolved and 0 < residual <= tolerance)
    return VerificationReport(
        "sum-unity",
        {
            "N": count,
            "precision": precision,
            "tolerance": _sci(tolerance),
            "error_bound": _sci(bound, 3),
            "resolved": bool(resolved),
        },
        passed,
        f"1 - sum_{{n=2}}^{{{count}}} p_n(pi^2)",
        "0",
        BigFloat(residual, sig).to_sci() if residual != 0 else "0",
    )


# ---------------------------------------------------------------------------
# sinc identities
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SincCheckConfig:
    """Truncation of 1 = sinc(pi x) + 2 sum_l (-1)^l sinc(pi sqrt(l^2+x^2)).

    ``precision`` <= 15 selects the float64 kernel; larger values run the sum
    in Decimal (slow: keep ``terms`` modest).
    """

    x: Fraction
    terms: int
    precision: int = 15
    tolerance: Optional[float] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", Fraction(self.x))
        if self.terms < 1:
            raise ValueError(f"terms must be >= 1, got {self.terms}")
        if self.precision < 10:
            raise ValueError(f"precision must be >= 10, got {self.precision}")

    def default_tolerance(self) -> float:
        # the tail behaves like x^2/L for L >> x, one-signed
        return float((self.x * self.x + 1) / self.terms)


def _sinc_sums_float(x: Fraction, terms: int) -> tuple[float, float]:
    xf = float(x)
    head = 1.0 if xf == 0 else math.sin(math.pi * xf) / (math.pi * xf)
    tail, last = _kernels.sinc_tail(xf * xf, terms)
    full = head + tail
    return full, full - last


def _sinc_sums_decimal(x: Fraction, terms: int, digits: int) -> tuple[Decimal, Decimal]:
    work = digits + guard_digits(digits)
    ctx = context(work)
    with localcontext(ctx):
        pi = pi_decimal(work)
        xd = to_decimal(x, work)
        x2 = to_decimal(x * x, work)
        head = Decimal(1) if x == 0 else dsin(pi * xd, work) / (pi * xd)
        tail = Decimal(0)
        last = Decimal(0)
        for l in range(1, terms + 1):
            root = (l * l + x2).sqrt()
            last = 2 * dsin(pi * (x2 / (l + root)), work) / (pi * root)
            tail += last
        full = head + tail
        return full, full - last


def verify_sinc_identity(cfg: SincCheckConfig) -> VerificationReport:
    """Residual 1 - R(x, L) raw and with partial-sum averaging of L and L-1."""
    if cfg.precision <= 15:
        full, prev = _sinc_sums_float(cfg.x, cfg.terms)
        raw = 1.0 - full
        avg = 1.0 - 0.5 * (full + prev)
        backend = _kernels.BACKEND
        raw_s, avg_s = f"{raw:.6e}", f"{avg:.6e}"
        raw_abs = abs(raw)
    else:
        full_d, prev_d = _sinc_sums_decimal(cfg.x, cfg.terms, cfg.precision)
        with localcontext(context(cfg.precision)):
            raw_d = 1 - full_d
            avg_d = 1 - (full_d + prev_d) / 2
        backend = "decimal"
        raw_s = _sci(raw_d, 10) if raw_d else "0"
        avg_s = _sci(avg_d, 10) if avg_d else "0"
        raw_abs = abs(float(raw_d))
    tol = cfg.tolerance if cfg.tolerance is not None else cfg.default_tolerance()
    if raw_abs == 0:
        raw_s = "0"
    return VerificationReport(
        "sinc-identity",
        {
            "x": str(cfg.x),
            "terms": cfg.terms,
            "precision": cfg.precision,
            "backend": backend,
            "tolerance": f"{tol:.6e}",
            "averaged_residual": avg_s,
        },
        raw_abs <= tol,
        f"R({cfg.x}, {cfg.terms})",
        "1",
        raw_s,
    )


def _sinc_limit_series(n: int) -> RationalPolynomial:
    """S_n(x) = (4n^2 - 1) p_n(x) / x, the finite 2F3 series."""
    p = conjecture_polynomial(n).scale(4 * n * n - 1)
    return RationalPolynomial(p.coefficients[1:])


def verify_sinc_limit(
    n: int,
    precision: int = DEFAULT_PRECISION,
    x: Fraction = Fraction(4),
    tolerance: Optional[float] = None,
) -> VerificationReport:
    """S_n(x) - sinc(sqrt x) at a test point; S_n -> sinc(sqrt x) as n grows.

    The default tolerance 1/n is empirical: at x = 4 the error is about 0.47/n.
    """
    if n < 2:
        raise ValueError(f"sinc limit needs n >= 2, got {n}")
    check_precision(precision)
    x = Fraction(x)
    series = _sinc_limit_series(n)(x)
    work = precision + guard_digits(precision)
    with localcontext(context(work)):
        if x == 0:
            target = Decimal(1)
        else:
            root = to_decimal(x, work).sqrt()
            target = dsin(root, work) / root
        diff = to_decimal(series, work) - target
    tol = tolerance if tolerance is not None else 1.0 / n
    return VerificationReport(
        "sinc-limit",
        {"n": n, "x": str(x), "precision": precision, "tolerance": f"{tol:.6e}"},
        abs(diff) <= Decimal(repr(tol)),
        f"S_{n}({x})",
        f"sinc(sqrt({x}))",
        _sci(diff, 10) if diff else "0",
    )


# ---------------------------------------------------------------------------
# monotonicity properties
# ---------------------------------------------------------------------------


def verify_ratio_monotone(n: int, m_max: int = 40, precision: int = DEFAULT_PRECISION) -> VerificationReport:
    """|b_m(n)/|B_{2m}| - a(n)| strictly decreasing over m = n+1..m_max."""
    work = precision + guard_digits(precision)
    a = _pn_at_pi2(n, work)
    rows = partition_rows(list(range(n + 1, m_max + 1)))
    gaps = []
    with localcontext(context(work)):
        for row in rows:
            ratio = to_decimal(row.term(n) / row.certified_sum, work)
            gaps.append((row.m, abs(ratio - a)))
    bad = [m2 for (m1, g1), (m2, g2) in zip(gaps, gaps[1:]) if not g2 < g1]
    return VerificationReport(
        "monotone:ratio-gap",
        {"n": n, "m_max": m_max, "precision": precision, "violations": bad},
        not bad,
        f"|b_m({n})/|B_2m| - a({n})|",
        "strictly decreasing in m",
        str(len(bad)),
    )


def verify_a_ratio_decreasing(count: int = 30, precision: int = DEFAULT_PRECISION) -> VerificationReport:
    values = [(n, _pn_at_pi2(n, precision)) for n in range(2, count + 1)]
    bad = [n2 for (_, v1), (n2, v2) in zip(values, values[1:]) if not 0 < v2 < v1]
    return VerificationReport(
        "monotone:a-ratio",
        {"N": count, "precision": precision, "violations": bad},
        not bad,
        "a(n)",
        "strictly decreasing, positive",
        str(len(bad)),
    )


def verify_approximant_error_trend(m: int = 10, precision: int = DEFAULT_PRECISION) -> VerificationReport:
    """Relative error |approximant - b_m(n)| / b_m(n) increases with n = 2..m."""
    (row,) = partition_rows([m])
    errs = []
    work = precision + guard_digits(precision)
    with localcontext(context(work)):
        for n in range(2, m + 1):
            exact = to_decimal(row.term(n), work)
            approx = approximant(m, n, precision).value
            errs.append((n, abs(approx - exact) / exact))
    bad = [n2 for (_, e1), (n2, e2) in zip(errs, errs[1:]) if not e2 > e1]
    return VerificationReport(
        "monotone:approximant-error",
        {"m": m, "precision": precision, "violations": bad},
        not bad,
        f"relative error of approximant, m={m}",
        "strictly increasing in n",
        str(len(bad)),
    )


def verify_sum_unity_decreasing(max_count: int = 50, precision: int = 250) -> VerificationReport:
    """The sum_to_unity residual is resolved, positive and strictly falling in N."""
    residuals = []
    unresolved = []
    for count in range(2, max_count + 1):
        r = sum_to_unity(count, precision)
        if not r.params["resolved"]:
            unresolved.append(count)
        residuals.append((count, Decimal(r.residual.split("@")[0]) if r.residual != "0" else Decimal(0)))
    bad = [c2 for (_, r1), (c2, r2) in zip(residuals, residuals[1:]) if not 0 < r2 < r1]
    return VerificationReport(
        "monotone:sum-unity",
        {"N": max_count, "precision": precision, "violations": bad, "unresolved": unresolved},
        not bad and not unresolved,
        "1 - sum_{n=2}^{N} p_n(pi^2)",
        "positive, strictly decreasing in N",
        str(len(bad) + len(unresolved)),
    )
