"""Bernoulli partitions: |B_2m| as a finite sum of positive, strictly falling
rationals read off the inverse of a triangular integer matrix, with exact and
high-precision checks of the identities around them."""

from .exact_core import (
    BernoulliCache,
    Rational,
    RationalPolynomial,
    bernoulli,
    binomial,
    factorial,
    poly_arith,
    zeta_ratio,
)
from .partitions import (
    PartitionRow,
    TriangularMatrix,
    b_via_q,
    build_matrix,
    invert_triangular,
    partition_row,
    q_polynomials,
)
from .bigfloat import BigFloat, PiValue, compute_pi
from .asymptotics import a_ratio, approximant, pn_polynomials, sum_to_unity
from .report import VerificationReport

__version__ = "0.1.0"
