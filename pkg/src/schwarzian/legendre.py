"""Legendre polynomials via the three-term recurrence.

The recurrence runs in exact rational arithmetic: monomial coefficients of
P_n grow like 4^n with heavy cancellation, so float iteration would be
useless well before the supported degree cap.  Floats only appear in the
returned numpy Polynomial.
"""

from __future__ import annotations

from fractions import Fraction

from numpy.polynomial import Polynomial

from .errors import DomainError

MAX_DEGREE = 50


def _legendre_fractions(n: int) -> list[Fraction]:
    """Exact ascending monomial coefficients of P_n."""
    p_prev = [Fraction(1)]
    if n == 0:
        return p_prev
    p = [Fraction(0), Fraction(1)]
    for k in range(1, n):
        shifted = [Fraction(0)] + p  # x * P_k
        nxt = []
        for j in range(k + 2):
            a = (2 * k + 1) * shifted[j]
            b = k * (p_prev[j] if j < len(p_prev) else Fraction(0))
            nxt.append((a - b) / (k + 1))
        p_prev, p = p, nxt
    return p


def legendre_poly(n: int) -> Polynomial:
    """P_n from (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}, with P_n(1) = 1
    verified exactly before conversion to floats."""
    if not 0 <= n <= MAX_DEGREE:
        raise DomainError(f"degree must lie in [0, {MAX_DEGREE}]")
    coeffs = _legendre_fractions(n)
    assert sum(coeffs) == 1  # P_n(1) = 1, exact in rational arithmetic
    return Polynomial([float(c) for c in coeffs])


def legendre_ode_residual(n: int) -> float:
    """Scaled max coefficient of (x^2-1) P_n'' + 2x P_n' - n(n+1) P_n,
    computed exactly; identically zero when the recurrence is right."""
    if not 0 <= n <= MAX_DEGREE:
        raise DomainError(f"degree must lie in [0, {MAX_DEGREE}]")
    p = _legendre_fractions(n)
    deg = len(p) - 1
    d1 = [j * p[j] for j in range(1, deg + 1)]
    d2 = [j * d1[j] for j in range(1, len(d1))]
    residual = [Fraction(0)] * (deg + 3)
    for j, c in enumerate(d2):
        residual[j + 2] += c  # x^2 P''
        residual[j] -= c  # -P''
    for j, c in enumerate(d1):
        residual[j + 1] += 2 * c  # 2x P'
    for j, c in enumerate(p):
        residual[j] -= n * (n + 1) * c
    scale = max(abs(c) for c in p)
    return float(max(abs(c) for c in residual) / max(scale, 1))
