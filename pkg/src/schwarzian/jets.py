"""Truncated Taylor-jet arithmetic for analytic functions of one variable.

A jet at a base point z0 stores coefficients c_0..c_n with

    f(z0 + h) = c_0 + c_1 h + ... + c_n h^n + O(h^{n+1}),

so f^{(k)}(z0) = k! c_k.  Coefficients are numpy arrays over a batch of
base points, which is what keeps disk-wide grid sweeps cheap; a scalar
point is just the 0-d batch.  The recurrences are the usual truncated
Leibniz/chain rules; tan uses tan' = 1 + tan^2 so no secant jet is needed.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import BranchCutError, PoleError

# A denominator value at least this small counts as a pole hit.
POLE_TOL = 1e-300


class JetContext:
    """Tracks evaluation failures over a batch of points.

    With ``strict=True`` the first failure raises.  Otherwise failures
    accumulate in ``invalid`` and the offending entries are patched with
    harmless values so the rest of the batch can proceed.
    """

    def __init__(self, shape=(), strict=True):
        self.strict = strict
        self.shape = shape
        self.invalid = np.zeros(shape, dtype=bool)

    def flag(self, mask, exc, message):
        bad = np.broadcast_to(np.asarray(mask, dtype=bool), self.shape)
        if not bad.any():
            return
        if self.strict:
            raise exc(message)
        self.invalid = self.invalid | bad


class Jet:
    """Taylor coefficients c_0..c_n at one or many base points.

    ``coeffs`` has shape (order+1,) + batch_shape.  ``valid`` is None in
    strict mode; in masked mode it marks entries that evaluated cleanly.
    """

    __slots__ = ("coeffs", "valid")

    def __init__(self, coeffs, valid=None):
        self.coeffs = np.asarray(coeffs, dtype=complex)
        self.valid = valid

    @property
    def order(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def value(self):
        return self.coeffs[0]

    def derivative(self, k: int = 1):
        """k-th derivative value, k! * c_k."""
        return self.coeffs[k] * math.factorial(k)

    def __add__(self, other):
        return Jet(self.coeffs + other.coeffs)

    def __sub__(self, other):
        return Jet(self.coeffs - other.coeffs)

    def __neg__(self):
        return Jet(-self.coeffs)

    def __mul__(self, other):
        return jet_mul(self, other)


def variable_jet(z, order: int) -> Jet:
    z = np.asarray(z, dtype=complex)
    coeffs = np.zeros((order + 1,) + z.shape, dtype=complex)
    coeffs[0] = z
    if order >= 1:
        coeffs[1] = 1.0
    return Jet(coeffs)


def const_jet(c, order: int, shape=()) -> Jet:
    coeffs = np.zeros((order + 1,) + shape, dtype=complex)
    coeffs[0] = c
    return Jet(coeffs)


def jet_mul(a: Jet, b: Jet) -> Jet:
    n = a.order
    out = np.zeros_like(a.coeffs)
    for k in range(n + 1):
        acc = out[k]
        for j in range(k + 1):
            acc = acc + a.coeffs[j] * b.coeffs[k - j]
        out[k] = acc
    return Jet(out)


def jet_recip(a: Jet, ctx: JetContext) -> Jet:
    v = a.coeffs[0]
    pole = np.abs(v) < POLE_TOL
    ctx.flag(pole, PoleError, "division by a vanishing denominator")
    v = np.where(pole, 1.0, v)
    n = a.order
    out = np.zeros_like(a.coeffs)
    out[0] = 1.0 / v
    for k in range(1, n + 1):
        acc = np.zeros_like(v)
        for j in range(1, k + 1):
            acc = acc + a.coeffs[j] * out[k - j]
        out[k] = -out[0] * acc
    return Jet(out)


def jet_div(a: Jet, b: Jet, ctx: JetContext) -> Jet:
    return jet_mul(a, jet_recip(b, ctx))


def jet_pow_int(a: Jet, n: int, ctx: JetContext) -> Jet:
    if n < 0:
        return jet_recip(jet_pow_int(a, -n, ctx), ctx)
    shape = a.coeffs.shape[1:]
    result = const_jet(1.0, a.order, shape)
    base = a
    while n:
        if n & 1:
            result = jet_mul(result, base)
        n >>= 1
        if n:
            base = jet_mul(base, base)
    return result


def jet_exp(a: Jet) -> Jet:
    n = a.order
    out = np.zeros_like(a.coeffs)
    out[0] = np.exp(a.coeffs[0])
    for k in range(1, n + 1):
        acc = np.zeros_like(out[0])
        for j in range(1, k + 1):
            acc = acc + j * a.coeffs[j] * out[k - j]
        out[k] = acc / k
    return Jet(out)


def _truncated(a: Jet, order: int) -> Jet:
    return Jet(a.coeffs[: order + 1])


def _derivative_jet(a: Jet) -> Jet:
    """Jet of a', one order lower."""
    n = a.order
    out = np.zeros((n,) + a.coeffs.shape[1:], dtype=complex)
    for k in range(n):
        out[k] = (k + 1) * a.coeffs[k + 1]
    return Jet(out)


def _flag_branch(v, ctx: JetContext, what: str):
    pole = np.abs(v) < POLE_TOL
    ctx.flag(pole, PoleError, f"{what} of a vanishing argument")
    branch = (v.imag == 0) & (v.real <= 0) & ~pole
    ctx.flag(branch, BranchCutError, f"{what} on the nonpositive real axis")
    return np.where(pole | branch, 1.0, v)


def jet_log(a: Jet, ctx: JetContext) -> Jet:
    n = a.order
    v = _flag_branch(np.asarray(a.coeffs[0]), ctx, "log")
    safe = Jet(np.concatenate([v[None], a.coeffs[1:]], axis=0))
    out = np.zeros_like(a.coeffs)
    out[0] = np.log(v)
    if n >= 1:
        q = jet_div(_derivative_jet(safe), _truncated(safe, n - 1), ctx)
        for k in range(1, n + 1):
            out[k] = q.coeffs[k - 1] / k
    return Jet(out)


def jet_sqrt(a: Jet, ctx: JetContext) -> Jet:
    n = a.order
    v = _flag_branch(np.asarray(a.coeffs[0]), ctx, "sqrt")
    out = np.zeros_like(a.coeffs)
    out[0] = np.sqrt(v)
    half = 0.5 / out[0]
    for k in range(1, n + 1):
        acc = np.array(a.coeffs[k], dtype=complex)
        for j in range(1, k):
            acc = acc - out[j] * out[k - j]
        out[k] = half * acc
    return Jet(out)


def jet_sin_cos(a: Jet) -> tuple[Jet, Jet]:
    n = a.order
    s = np.zeros_like(a.coeffs)
    c = np.zeros_like(a.coeffs)
    s[0] = np.sin(a.coeffs[0])
    c[0] = np.cos(a.coeffs[0])
    for k in range(1, n + 1):
        sa = np.zeros_like(s[0])
        ca = np.zeros_like(c[0])
        for j in range(1, k + 1):
            sa = sa + j * a.coeffs[j] * c[k - j]
            ca = ca + j * a.coeffs[j] * s[k - j]
        s[k] = sa / k
        c[k] = -ca / k
    return Jet(s), Jet(c)


def jet_tan(a: Jet) -> Jet:
    n = a.order
    t = np.zeros_like(a.coeffs)
    u = np.zeros_like(a.coeffs)  # u = 1 + t^2
    t[0] = np.tan(a.coeffs[0])
    u[0] = 1.0 + t[0] * t[0]
    for k in range(1, n + 1):
        acc = np.zeros_like(t[0])
        for j in range(1, k + 1):
            acc = acc + j * a.coeffs[j] * u[k - j]
        t[k] = acc / k
        uk = np.zeros_like(t[0])
        for j in range(k + 1):
            uk = uk + t[j] * t[k - j]
        u[k] = uk
    return Jet(t)


def jet_compose(outer: Jet, inner: Jet) -> Jet:
    """Jet of f(g(.)) from the jet of f at g(z0) and the jet of g at z0."""
    n = inner.order
    delta = Jet(inner.coeffs.copy())
    delta.coeffs[0] = 0.0
    shape = inner.coeffs.shape[1:]
    acc = const_jet(0.0, n, shape)
    acc.coeffs[0] = outer.coeffs[n]
    for k in range(n - 1, -1, -1):
        acc = jet_mul(acc, delta)
        acc.coeffs[0] = acc.coeffs[0] + outer.coeffs[k]
    return acc
