"""Integer-order Bessel functions of the first kind.

:func:`bessel_j_table` uses Miller's downward recurrence

    J_{k-1}(x) = (2k / x) J_k(x) - J_{k+1}(x)

started well above the largest wanted order, and normalises the trial
sequence with the completeness identity ``J_0^2 + 2 sum_k J_k^2 = 1``; the
overall sign is taken from ``J_0 + 2 sum_k J_{2k} = 1``. Downward recurrence
is stable for all orders, including the tiny values far beyond ``q ~ x``.

:func:`bessel_j_series` is an independent reference: the ascending power
series summed in exact rational arithmetic.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .errors import DomainError

MAX_ARGUMENT = 700.0

_RESCALE = 1e100
_SMALL = 1e-3


def _start_order(x: float, qmax: int) -> int:
    m = max(qmax, math.ceil(x)) + 40 + int(12.0 * x ** (1.0 / 3.0))
    return m + (m % 2)


def bessel_j_table(x: float, qmax: int) -> np.ndarray:
    """Return ``[J_0(x), J_1(x), ..., J_qmax(x)]``.

    Negative arguments use ``J_q(-x) = (-1)^q J_q(x)``. Raises
    :class:`DomainError` for ``|x| > 700`` or non-finite ``x``.
    """
    if qmax < 0:
        raise DomainError(f"qmax must be >= 0, got {qmax}")
    if not math.isfinite(x):
        raise DomainError(f"Bessel argument must be finite, got {x!r}")
    ax = abs(float(x))
    if ax > MAX_ARGUMENT:
        raise DomainError(f"|x|={ax:g} outside validated range (<= {MAX_ARGUMENT:g})")
    out = np.zeros(qmax + 1)
    if ax == 0.0:
        out[0] = 1.0
        return out
    if ax < _SMALL:
        out[:] = _small_argument_table(ax, qmax)
    else:
        out[:] = _miller(ax, qmax)
    if x < 0:
        out[1::2] *= -1.0
    return out


def _small_argument_table(ax: float, qmax: int) -> np.ndarray:
    # four series terms: relative truncation error < (ax/2)^8 / 24
    out = np.empty(qmax + 1)
    lead = 1.0
    h2 = (ax / 2.0) ** 2
    for q in range(qmax + 1):
        if q:
            lead *= (ax / 2.0) / q
        out[q] = lead * (1.0 - h2 / (q + 1) * (1.0 - h2 / (2 * (q + 2)) * (1.0 - h2 / (3 * (q + 3)))))
    return out


def _miller(ax: float, qmax: int) -> np.ndarray:
    m = _start_order(ax, qmax)
    j = np.zeros(m + 2)
    j[m] = 1e-30
    for k in range(m, 0, -1):
        j[k - 1] = (2.0 * k / ax) * j[k] - j[k + 1]
        if abs(j[k - 1]) > _RESCALE:
            j[k - 1 :] /= _RESCALE

    j /= np.max(np.abs(j))
    sumsq = j[0] ** 2 + 2.0 * np.sum(j[1:] ** 2)
    parity = j[0] + 2.0 * np.sum(j[2::2])
    scale = math.copysign(math.sqrt(sumsq), parity)
    return j[: qmax + 1] / scale


def bessel_j(q: int, x: float) -> float:
    """``J_q(x)`` for any integer ``q`` (negative orders via ``J_{-q} = (-1)^q J_q``)."""
    aq = abs(int(q))
    val = bessel_j_table(x, aq)[aq]
    return -val if (q < 0 and aq % 2) else val


def bessel_j_orders(x: float, max_order: int) -> tuple[np.ndarray, np.ndarray]:
    """Orders ``-Q..Q`` and the corresponding ``J_q(x)``."""
    pos = bessel_j_table(x, max_order)
    orders = np.arange(-max_order, max_order + 1)
    neg = pos[:0:-1].copy()
    neg[(orders[:max_order] % 2) != 0] *= -1.0
    return orders, np.concatenate([neg, pos])


def bessel_j_series(q: int, x: float, tol: float = 1e-30) -> float:
    """Reference ``J_q(x)`` from the power series in exact rational arithmetic.

    Intended for moderate ``|x|`` (the number of terms grows like ``e x / 2``).
    """
    aq = abs(int(q))
    half = Fraction(x) / 2
    half_sq = half * half
    term = half**aq / math.factorial(aq)
    total = Fraction(0)
    k = 0
    while True:
        total += term
        k += 1
        term = -term * half_sq / (k * (k + aq))
        if k > abs(x) and abs(term) < tol:
            break
    val = float(total)
    return -val if (q < 0 and aq % 2) else val
