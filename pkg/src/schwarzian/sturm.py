"""Second-order linear ODEs along segments in the disk and on (-1, 1).

Integrates u'' + psi u = 0 along arclength-parametrized line segments,
checks the convexity inequality v'' + |psi| v >= 0 for v = |u|, isolates
zeros, and runs the oscillation counts that back the separation and
lower-bound arguments.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .analytic import NehariProfile
from .errors import DomainError, IntegrationError, RootIsolationError
from .expr import Expr, eval_jet
from .legendre import legendre_poly

DEFAULT_SEED = 0xC0FFEE
_EDGE = 1e-6  # standoff from the singular endpoints of (-1, 1)


@dataclass(frozen=True)
class SegmentPath:
    """Arclength parametrization z(s) = alpha + s (beta - alpha)/b of the
    segment from alpha to beta, b = |beta - alpha|."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        if max(abs(self.alpha), abs(self.beta)) > 1.0 - 1e-9:
            raise DomainError("segment endpoints must stay in |z| <= 1 - 1e-9")
        if self.alpha == self.beta:
            raise DomainError("degenerate segment")

    @property
    def length(self) -> float:
        return abs(self.beta - self.alpha)

    @property
    def direction(self) -> complex:
        return (self.beta - self.alpha) / self.length

    def point(self, s):
        return self.alpha + np.asarray(s) * self.direction


@dataclass
class SegmentSolution:
    """Sampled solution u(z(s)) and its s-derivative on a uniform grid."""

    path: SegmentPath
    s: np.ndarray
    u: np.ndarray
    du: np.ndarray
    psi_values: np.ndarray
    residual: float

    @property
    def v(self) -> np.ndarray:
        return np.abs(self.u)


@dataclass
class ZeroRecord:
    locations: list
    count: int
    min_gap: float | None


def _rk4_linear(q, h, n, u0, du0):
    """Classical fixed-step integration of U'' = -q(s) U given q on the
    half-step grid q[0..2n]."""
    u = np.empty(n + 1, dtype=complex)
    du = np.empty(n + 1, dtype=complex)
    y0, y1 = complex(u0), complex(du0)
    u[0], du[0] = y0, y1
    for i in range(n):
        qa, qm, qb = q[2 * i], q[2 * i + 1], q[2 * i + 2]
        k1u, k1w = y1, -qa * y0
        k2u = y1 + 0.5 * h * k1w
        k2w = -qm * (y0 + 0.5 * h * k1u)
        k3u = y1 + 0.5 * h * k2w
        k3w = -qm * (y0 + 0.5 * h * k2u)
        k4u = y1 + h * k3w
        k4w = -qb * (y0 + h * k3u)
        y0 = y0 + h / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u)
        y1 = y1 + h / 6.0 * (k1w + 2 * k2w + 2 * k3w + k4w)
        u[i + 1], du[i + 1] = y0, y1
    return u, du


def integrate_segment(
    psi: Expr, path: SegmentPath, u0: complex, du0: complex, steps: int = 1000
) -> SegmentSolution:
    """Integrate u'' + psi u = 0 along the segment; du0 is the derivative
    with respect to arclength at s = 0.

    Runs at the requested step count and at twice that; the coarse/fine
    mismatch is the reported residual, and the fine grid is returned.
    """
    if steps < 100:
        raise DomainError("need at least 100 steps")
    b = path.length
    zeta2 = path.direction**2
    quarter = np.linspace(0.0, b, 4 * steps + 1)
    psi_half = eval_jet(psi, path.point(quarter), order=0).value
    q = psi_half * zeta2

    n_fine = 2 * steps
    u_fine, du_fine = _rk4_linear(q, b / n_fine, n_fine, u0, du0)
    u_coarse, _ = _rk4_linear(q[::2], b / steps, steps, u0, du0)

    scale = max(1.0, float(np.max(np.abs(u_fine))))
    residual = float(np.max(np.abs(u_coarse - u_fine[::2])) / scale)
    if residual > 1e-6:
        raise IntegrationError(
            f"step count too small: refinement residual {residual:.3e} exceeds 1e-6"
        )
    return SegmentSolution(
        path=path,
        s=np.linspace(0.0, b, n_fine + 1),
        u=u_fine,
        du=du_fine,
        psi_values=psi_half[::2],
        residual=residual,
    )


# ---------------------------------------------------------------------------
# Zero isolation on segment solutions


def _hermite(sol: SegmentSolution, s: float):
    """Cubic Hermite interpolant value and derivative at s."""
    grid = sol.s
    i = min(max(int(np.searchsorted(grid, s) - 1), 0), len(grid) - 2)
    h = grid[i + 1] - grid[i]
    t = (s - grid[i]) / h
    ua, ub, da, db = sol.u[i], sol.u[i + 1], sol.du[i], sol.du[i + 1]
    h00 = 2 * t**3 - 3 * t**2 + 1
    h10 = t**3 - 2 * t**2 + t
    h01 = -2 * t**3 + 3 * t**2
    h11 = t**3 - t**2
    value = h00 * ua + h10 * h * da + h01 * ub + h11 * h * db
    d00 = 6 * t**2 - 6 * t
    d10 = 3 * t**2 - 4 * t + 1
    d01 = -6 * t**2 + 6 * t
    d11 = 3 * t**2 - 2 * t
    deriv = (d00 * ua + d01 * ub) / h + d10 * da + d11 * db
    return value, deriv


def find_zeros(sol: SegmentSolution, tol: float = 1e-8) -> ZeroRecord:
    """Zeros of u along the segment.

    Sign changes are unreliable for complex-valued u, so candidates are
    local minima of |u|; each is polished on the cubic Hermite model of u
    and accepted when the interpolated modulus drops below tol relative to
    the solution scale, with the derivative bounded away from zero.
    """
    v = sol.v
    scale = float(np.max(v))
    if scale == 0.0:
        return ZeroRecord([], 0, None)
    cut = tol * scale
    candidates = []
    if v[0] <= cut:
        candidates.append(0)
    if v[-1] <= cut:
        candidates.append(len(v) - 1)
    interior = np.flatnonzero((v[1:-1] <= v[:-2]) & (v[1:-1] <= v[2:])) + 1
    candidates.extend(int(i) for i in interior)

    zeros = []
    for i in candidates:
        s = float(sol.s[i])
        if v[i] > cut:
            lo = float(sol.s[max(i - 1, 0)])
            hi = float(sol.s[min(i + 1, len(v) - 1)])
            ok = False
            for _ in range(6):
                value, deriv = _hermite(sol, s)
                if abs(deriv) == 0.0:
                    break
                step = (value * np.conj(deriv)).real / abs(deriv) ** 2
                s = float(min(max(s - step, lo), hi))
                if abs(step) < 1e-15 * max(1.0, abs(s)):
                    ok = True
                    break
            value, deriv = _hermite(sol, s)
            if not (abs(value) <= cut and abs(deriv) > cut):
                continue
        zeros.append(s)

    zeros.sort()
    h = sol.s[1] - sol.s[0]
    merged: list[float] = []
    for s in zeros:
        if not merged or s - merged[-1] > h:
            merged.append(s)
    gaps = np.diff(merged)
    return ZeroRecord(
        locations=merged,
        count=len(merged),
        min_gap=float(gaps.min()) if len(gaps) else None,
    )


@dataclass
class SeparationCheck:
    passed: bool
    vacuous: bool
    min_gap: float | None
    bound: float


def zero_separation_check(C: float, record: ZeroRecord) -> SeparationCheck:
    """Zeros of a solution with |psi| <= C/2 must be at least
    pi sqrt(2/C) apart; fewer than two zeros passes vacuously."""
    if C <= 0:
        raise DomainError("need C > 0")
    bound = math.pi * math.sqrt(2.0 / C)
    if record.count < 2:
        return SeparationCheck(passed=True, vacuous=True, min_gap=record.min_gap, bound=bound)
    return SeparationCheck(
        passed=record.min_gap >= bound - 1e-9,
        vacuous=False,
        min_gap=record.min_gap,
        bound=bound,
    )


def modulus_convexity_residual(sol: SegmentSolution, psi: Expr | None = None) -> float:
    """Minimum of (v'' + |psi| v) / scale over interior grid points with
    v > 1e-8, using second central differences for v''.

    Nonnegative up to discretization noise whenever u solves
    u'' + psi u = 0 and v = |u| stays positive; the returned value is
    normalized by the magnitude of the two terms, so the contract is
    residual >= -1e-6.
    """
    v = sol.v
    if psi is None:
        psi_abs = np.abs(sol.psi_values)
    else:
        psi_abs = np.abs(eval_jet(psi, sol.path.point(sol.s), order=0).value)
    h = sol.s[1] - sol.s[0]
    vpp = (v[2:] - 2 * v[1:-1] + v[:-2]) / h**2
    term = psi_abs[1:-1] * v[1:-1]
    keep = np.minimum(np.minimum(v[:-2], v[1:-1]), v[2:]) > 1e-8
    if not keep.any():
        raise DomainError("modulus vanishes across the whole interior range")
    dropped = int((~keep).sum())
    if dropped > 0.2 * keep.size:
        warnings.warn(
            f"interior range shrank: {dropped}/{keep.size} points below the positivity floor",
            stacklevel=2,
        )
    resid = vpp[keep] + term[keep]
    scale = max(1.0, float(np.max(np.abs(vpp[keep]) + term[keep])))
    return float(np.min(resid) / scale)


# ---------------------------------------------------------------------------
# Real-line oscillation runs


def _count_sign_changes(y: np.ndarray, floor: float) -> int:
    signs = np.sign(y[np.abs(y) > floor])
    if len(signs) == 0:
        return 0
    return int(np.sum(signs[1:] != signs[:-1]))


def _integrate_real(pfun, x0: float, x1: float, y0: float, dy0: float, n_eval: int = 2000):
    sol = solve_ivp(
        lambda x, y: [y[1], -pfun(x) * y[0]],
        (x0, x1),
        [y0, dy0],
        method="RK45",
        rtol=1e-9,
        atol=1e-12,
        t_eval=np.linspace(x0, x1, n_eval),
    )
    reached = float(sol.t[-1]) if sol.t.size else x0
    return sol.y[0], reached, bool(sol.success)


def legendre_lower_bound(n: int, crosscheck: bool = True) -> ZeroRecord:
    """Zeros of (1 - x^2) P_n'(x) in (-1, 1): exactly n - 1 of them.

    The polynomial side isolates the zeros of P_n' by bracketing and
    bisection.  The cross-check integrates y'' + n(n+1)/(1-x^2) y = 0 from
    x = -1 + 1e-6 and requires at least n - 1 sign changes.
    """
    if not 1 <= n <= 30:
        raise DomainError("supported degrees are 1..30")
    dp = legendre_poly(n).deriv()
    grid = np.linspace(-1.0 + 1e-9, 1.0 - 1e-9, max(400, 60 * n))
    vals = dp(grid)
    brackets = np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)
    if n >= 2 and len(brackets) != n - 1:
        raise RootIsolationError(
            f"bisection found {len(brackets)} brackets for P_{n}', expected {n - 1}"
        )
    roots = [float(brentq(dp, grid[i], grid[i + 1], xtol=1e-14)) for i in brackets]

    if crosscheck and n >= 2:
        c = float(n * (n + 1))
        y, reached, ok = _integrate_real(
            lambda x: c / (1.0 - x * x), -1.0 + _EDGE, 1.0 - _EDGE, 0.0, 1.0, n_eval=4000
        )
        if not ok:
            raise IntegrationError(f"oscillation cross-check stalled at x = {reached:.6f}")
        changes = _count_sign_changes(y, 1e-10 * float(np.max(np.abs(y))))
        if changes < n - 1:
            raise IntegrationError(
                f"oscillation cross-check saw {changes} sign changes, expected >= {n - 1}"
            )
    gaps = np.diff(roots)
    return ZeroRecord(
        locations=roots, count=len(roots), min_gap=float(gaps.min()) if len(gaps) else None
    )


def profile_solution_zero_count(
    profile: NehariProfile, x0: float, u0: float, du0: float
) -> tuple[int, tuple[float, float]]:
    """Zero count in (-1, 1) of the solution of u'' + p(|x|) u = 0 with the
    given data at x0; returns (count, (left_reached, right_reached))."""
    if u0 == 0.0 and du0 == 0.0:
        raise DomainError("trivial initial data defines the zero solution")
    pfun = lambda x: float(profile.p(abs(x)))
    y_r, reached_r, ok_r = _integrate_real(pfun, x0, 1.0 - _EDGE, u0, du0)
    y_l, reached_l, ok_l = _integrate_real(pfun, x0, -1.0 + _EDGE, u0, du0)
    if not (ok_r and ok_l):
        warnings.warn(
            f"integration stalled; reached ({reached_l:.6f}, {reached_r:.6f})", stacklevel=2
        )
    y = np.concatenate([y_l[::-1], y_r[1:]])
    floor = 1e-10 * float(np.max(np.abs(y)))
    return _count_sign_changes(y, floor), (reached_l, reached_r)


@dataclass
class DisconjugacyReport:
    profile: str
    trials: int
    max_zero_count: int
    reached: tuple[float, float] = field(default=(-1.0 + _EDGE, 1.0 - _EDGE))

    @property
    def passed(self) -> bool:
        return self.max_zero_count <= 1


def disconjugacy_check(
    profile: NehariProfile, trials: int = 100, seed: int = DEFAULT_SEED
) -> DisconjugacyReport:
    """Falsification harness, not a proof: random initial data at random
    base points must never produce a solution with more than one zero."""
    rng = np.random.default_rng(seed)
    worst = 0
    reached = (-1.0 + _EDGE, 1.0 - _EDGE)
    for _ in range(trials):
        x0 = float(rng.uniform(-0.5, 0.5))
        angle = float(rng.uniform(0.0, 2 * math.pi))
        count, spans = profile_solution_zero_count(
            profile, x0, math.cos(angle), math.sin(angle)
        )
        if count > worst:
            worst = count
        reached = (max(reached[0], spans[0]), min(reached[1], spans[1]))
    return DisconjugacyReport(
        profile=profile.kind, trials=trials, max_zero_count=worst, reached=reached
    )
