"""float64 kernels for the truncated sinc sum.

The numba path is used when numba imports and ``BERNPART_DISABLE_NUMBA`` is
unset (or "0"); otherwise the vectorized numpy path runs. Both return the
same quantities, differing only in summation order.
"""
from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("BERNPART_DISABLE_NUMBA", "0") not in ("", "0")

try:
    if _DISABLED:
        raise ImportError("numba disabled by BERNPART_DISABLE_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


def _tail_terms_numpy(x2: float, terms: int) -> np.ndarray:
    l = np.arange(1, terms + 1, dtype=np.float64)
    root = np.sqrt(l * l + x2)
    # sin(pi sqrt(l^2+x^2)) = (-1)^l sin(pi x^2 / (l + sqrt(l^2+x^2))), so the
    # alternating sign cancels and the small angle is formed without cancellation
    delta = x2 / (l + root)
    return 2.0 * np.sin(np.pi * delta) / (np.pi * root)


def sinc_tail_numpy(x2: float, terms: int) -> tuple[float, float]:
    """(sum_{l=1}^{terms} t_l, t_terms) for t_l = 2 (-1)^l sinc(pi sqrt(l^2+x^2))."""
    t = _tail_terms_numpy(x2, terms)
    return float(np.sum(t)), float(t[-1])


if HAVE_NUMBA:

    @njit(cache=True)
    def _sinc_tail_numba(x2, terms):
        total = 0.0
        comp = 0.0
        last = 0.0
        for i in range(1, terms + 1):
            l = float(i)
            root = np.sqrt(l * l + x2)
            t = 2.0 * np.sin(np.pi * (x2 / (l + root))) / (np.pi * root)
            # Kahan summation keeps the long sum close to numpy's pairwise result
            y = t - comp
            s = total + y
            comp = (s - total) - y
            total = s
            last = t
        return total, last

    def sinc_tail_numba(x2: float, terms: int) -> tuple[float, float]:
        total, last = _sinc_tail_numba(float(x2), int(terms))
        return float(total), float(last)

    sinc_tail = sinc_tail_numba
else:
    sinc_tail_numba = None
    sinc_tail = sinc_tail_numpy

BACKEND = "numba" if HAVE_NUMBA else "numpy"
