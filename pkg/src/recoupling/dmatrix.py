"""Wigner small-d matrix elements for small spins.

``little_d(s, nu, mu, theta)`` is ``<s nu| exp(-i theta S_y) |s mu>``.  The
index arguments ``nu`` and ``mu`` are twice-values, like spins.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .spin import as_twice, factorial, format_twice

__all__ = ["little_d", "d_matrix"]


def _check(ts: int, tn: int, tm: int) -> None:
    for t in (tn, tm):
        if abs(t) > ts or (ts + t) % 2:
            raise ValueError(
                f"index {t}/2 is not a projection of spin {format_twice(ts)}"
            )


def _d_t(ts: int, tn: int, tm: int, theta: float) -> float:
    # integer labels: j+nu, j-nu, j+mu, j-mu, all >= 0
    jpn, jmn = (ts + tn) // 2, (ts - tn) // 2
    jpm, jmm = (ts + tm) // 2, (ts - tm) // 2
    pref = factorial(jpn) * factorial(jmn) * factorial(jpm) * factorial(jmm)
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    total = 0.0
    d = (tm - tn) // 2  # mu - nu, integer
    for k in range(max(0, d), min(jpm, jmn) + 1):
        coef = Fraction(
            (-1) ** (k - d),
            factorial(jpm - k) * factorial(k) * factorial(jmn - k) * factorial(k + (tn - tm) // 2),
        )
        if coef == 0:
            continue
        pc = ts - 2 * k + d
        ps = 2 * k - d
        total += float(coef) * c ** pc * s ** ps
    return math.sqrt(pref) * total


def little_d(s, nu: int, mu: int, theta: float) -> float:
    """d^s_{nu mu}(theta); ``nu`` and ``mu`` are twice-values."""
    ts = as_twice(s)
    _check(ts, nu, mu)
    return _d_t(ts, nu, mu, theta)


def d_matrix(s, theta: float) -> np.ndarray:
    """Full (2s+1)x(2s+1) matrix; row/column order nu, mu = s, s-1, ..., -s."""
    ts = as_twice(s)
    idx = range(ts, -ts - 1, -2)
    return np.array([[_d_t(ts, n, m, theta) for m in idx] for n in idx])
