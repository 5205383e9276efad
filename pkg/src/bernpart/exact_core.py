"""Exact substrate: big-integer combinatorics, rational polynomials, Bernoulli
numbers and even-zeta ratios.

Every quantity here is an exact :class:`fractions.Fraction` (aliased as
``Rational``), which is always stored reduced with a positive denominator.
"""
from __future__ import annotations

import math
import threading
from fractions import Fraction
from typing import Iterable, Union

__all__ = [
    "Rational",
    "RationalPolynomial",
    "BernoulliCache",
    "factorial",
    "binomial",
    "falling_factorial",
    "bernoulli",
    "bernoulli_akiyama_tanigawa",
    "poly_arith",
    "zeta_ratio",
    "format_rational",
    "parse_rational",
]

Rational = Fraction
Scalar = Union[int, Fraction]


def factorial(k: int) -> int:
    if k < 0:
        raise ValueError(f"factorial needs k >= 0, got {k}")
    return math.factorial(k)


def binomial(a: int, b: int) -> int:
    """C(a, b), zero outside 0 <= b <= a."""
    if a < 0:
        raise ValueError(f"binomial needs a >= 0, got {a}")
    if b < 0 or b > a:
        return 0
    return math.comb(a, b)


def falling_factorial(a: Scalar, k: int) -> Scalar:
    """a (a-1) ... (a-k+1); the empty product (k=0) is 1."""
    out: Scalar = 1
    for i in range(k):
        out *= a - i
    return out


def format_rational(q: Scalar) -> str:
    """'p/q' in base 10; integers drop the '/1'."""
    return str(Fraction(q))


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------


class RationalPolynomial:
    """Dense univariate polynomial with Fraction coefficients.

    ``coefficients[i]`` multiplies ``var**i``. Trailing zeros are stripped on
    construction, so the zero polynomial has an empty coefficient tuple and
    degree ``-inf``.
    """

    __slots__ = ("coefficients", "var")

    def __init__(self, coefficients: Iterable[Scalar] = (), var: str = "x"):
        coeffs = [Fraction(c) for c in coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.coefficients: tuple[Fraction, ...] = tuple(coeffs)
        self.var = var

    @classmethod
    def constant(cls, c: Scalar, var: str = "x") -> RationalPolynomial:
        return cls([c], var)

    @classmethod
    def monomial(cls, power: int, c: Scalar = 1, var: str = "x") -> RationalPolynomial:
        return cls([0] * power + [c], var)

    @classmethod
    def falling(cls, shift: Scalar, k: int, var: str = "x") -> RationalPolynomial:
        """The polynomial (v+shift)(v+shift-1)...(v+shift-k+1) in v."""
        out = cls.constant(1, var)
        for i in range(k):
            out = out * cls([Fraction(shift) - i, 1], var)
        return out

    @property
    def degree(self) -> float:
        return len(self.coefficients) - 1 if self.coefficients else -math.inf

    def is_zero(self) -> bool:
        return not self.coefficients

    def coefficient(self, i: int) -> Fraction:
        return self.coefficients[i] if 0 <= i < len(self.coefficients) else Fraction(0)

    def __call__(self, value):
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * value + c
        return acc

    def __eq__(self, other: object) -> bool:
        if isinstance(other, RationalPolynomial):
            return self.coefficients == other.coefficients
        if isinstance(other, (int, Fraction)):
            return self.coefficients == RationalPolynomial([other]).coefficients
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coefficients)

    def _coerce(self, other) -> RationalPolynomial:
        if isinstance(other, RationalPolynomial):
            return other
        return RationalPolynomial([other], self.var)

    def __add__(self, other) -> RationalPolynomial:
        other = self._coerce(other)
        n = max(len(self.coefficients), len(other.coefficients))
        return RationalPolynomial(
            [self.coefficient(i) + other.coefficient(i) for i in range(n)], self.var
        )

    __radd__ = __add__

    def __neg__(self) -> RationalPolynomial:
        return RationalPolynomial([-c for c in self.coefficients], self.var)

    def __sub__(self, other) -> RationalPolynomial:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> RationalPolynomial:
        return self._coerce(other) - self

    def __mul__(self, other) -> RationalPolynomial:
        if not isinstance(other, RationalPolynomial):
            return self.scale(other)
        if self.is_zero() or other.is_zero():
            return RationalPolynomial([], self.var)
        out = [Fraction(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            if a == 0:
                continue
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return RationalPolynomial(out, self.var)

    __rmul__ = __mul__

    def scale(self, c: Scalar) -> RationalPolynomial:
        c = Fraction(c)
        return RationalPolynomial([c * a for a in self.coefficients], self.var)

    def shift(self, c: Scalar) -> RationalPolynomial:
        """Return r with r(v) = self(v + c)."""
        c = Fraction(c)
        if c == 0 or self.is_zero():
            return RationalPolynomial(self.coefficients, self.var)
        # Horner in (v + c): r <- r * (v + c) + a_i
        out: list[Fraction] = []
        for a in reversed(self.coefficients):
            nxt = [Fraction(0)] * (len(out) + 1)
            for k, r in enumerate(out):
                nxt[k] += c * r
                nxt[k + 1] += r
            nxt[0] += a
            out = nxt
        return RationalPolynomial(out, self.var)

    def __repr__(self) -> str:
        return f"RationalPolynomial({[str(c) for c in self.coefficients]!r}, var={self.var!r})"

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts: list[str] = []
        for power, c in enumerate(self.coefficients):
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            num, den = abs(c.numerator), c.denominator
            if power == 0:
                body = str(num)
            else:
                mono = self.var if power == 1 else f"{self.var}^{power}"
                body = mono if num == 1 else f"{num}*{mono}"
            if den != 1:
                body = f"{body}/{den}"
            parts.append(f"{sign} {body}")
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


def poly_arith(p: RationalPolynomial, q, op: str) -> RationalPolynomial:
    """Functional front end: op in add | sub | mul | scale | shift_argument.

    For ``scale`` and ``shift_argument`` the second operand is a scalar.
    """
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    if op == "scale":
        return p.scale(q)
    if op == "shift_argument":
        return p.shift(q)
    raise ValueError(f"unknown polynomial op {op!r}")


# ---------------------------------------------------------------------------
# Bernoulli numbers
# ---------------------------------------------------------------------------


class BernoulliCache:
    """Append-only memo of B_{2k}, filled by the defining recurrence

        sum_{j=0}^{k} C(k+1, j) B_j = 0,

    with B_1 = -1/2 and every other odd-index value zero. Readers never lock;
    extensions are serialized.
    """

    def __init__(self) -> None:
        self._even: list[Fraction] = [Fraction(1)]  # _even[k] = B_{2k}
        self._lock = threading.Lock()

    @property
    def values(self) -> dict[int, Fraction]:
        return {2 * k: b for k, b in enumerate(list(self._even))}

    def __len__(self) -> int:
        return len(self._even)

    def even(self, k: int) -> Fraction:
        """B_{2k}."""
        evens = self._even
        if k < len(evens):
            return evens[k]
        with self._lock:
            evens = self._even
            new = list(evens)
            for kk in range(len(new), k + 1):
                n = 2 * kk
                # odd terms: only B_1 contributes
                s = Fraction(-(n + 1), 2)
                for j in range(kk):
                    s += math.comb(n + 1, 2 * j) * new[j]
                new.append(-s / (n + 1))
            # swap in a longer list; existing entries are untouched
            self._even = new
            return new[k]

    def __call__(self, k: int) -> Fraction:
        if k < 0:
            raise ValueError(f"bernoulli needs k >= 0, got {k}")
        if k == 1:
            return Fraction(-1, 2)
        if k % 2:
            return Fraction(0)
        return self.even(k // 2)


_CACHE = BernoulliCache()


def bernoulli(k: int) -> Fraction:
    """B_k with B_1 = -1/2."""
    return _CACHE(k)


def bernoulli_akiyama_tanigawa(k: int) -> Fraction:
    """Independent B_k via the Akiyama-Tanigawa triangle (B_1 = -1/2 here too)."""
    if k < 0:
        raise ValueError(f"bernoulli needs k >= 0, got {k}")
    a = [Fraction(0)] * (k + 1)
    for m in range(k + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
    # the triangle yields the B_1 = +1/2 convention
    return -a[0] if k == 1 else a[0]


def zeta_ratio(m: int, k: int) -> Fraction:
    """pi^(2k) zeta(2m-2k) / zeta(2m) as an exact rational.

    Uses |B_{2j}| = 2 (2j)! zeta(2j) / (2 pi)^(2j), which turns the ratio into
    |B_{2m-2k}| / |B_{2m}| * (2m)! / (2m-2k)! / 4^k.
    """
    if m < 1:
        raise ValueError(f"zeta_ratio needs m >= 1, got {m}")
    if not 0 <= k < m:
        raise ValueError(f"zeta_ratio needs 0 <= k < m, got k={k}, m={m}")
    num = abs(bernoulli(2 * m - 2 * k)) * falling_factorial(2 * m, 2 * k)
    return num / (abs(bernoulli(2 * m)) * 4**k)


def bernoulli_even_table(max_m: int) -> list[Fraction]:
    """[B_2, B_4, ..., B_{2 max_m}]."""
    return [bernoulli(2 * m) for m in range(1, max_m + 1)]
