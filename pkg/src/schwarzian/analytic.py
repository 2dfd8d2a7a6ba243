"""Schwarzian derivatives, Schwarzian norms, and Nehari-profile checks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import CriticalPointError, DomainError, NormEstimationError
from .expr import Compose, Expr, eval_jet

# Refinement never walks closer to the unit circle than this.
_R_CAP = 1.0 - 1e-7
_CRIT_RTOL = 1e-12


def _schwarzian_from_jet(jet):
    """S f = 6 (c1 c3 - c2^2) / c1^2 from an order-3 jet."""
    c1, c2, c3 = jet.coeffs[1], jet.coeffs[2], jet.coeffs[3]
    return 6.0 * (c1 * c3 - c2 * c2) / (c1 * c1)


def _critical_mask(jet):
    # scale from the value and slope only: near a pole the higher
    # coefficients dwarf a perfectly healthy f'
    scale = np.maximum(np.abs(jet.coeffs[0]), np.abs(jet.coeffs[1]))
    return np.abs(jet.coeffs[1]) <= _CRIT_RTOL * scale


def schwarzian(f: Expr, z):
    """S f(z) = f'''/f' - (3/2)(f''/f')^2 from a single order-3 jet.

    Accepts a scalar or an ndarray of points; raises CriticalPointError
    where |f'| falls below 1e-12 of the jet magnitude.
    """
    jet = eval_jet(f, z, order=3)
    if _critical_mask(jet).any():
        raise CriticalPointError("f' vanishes at a requested point")
    s = _schwarzian_from_jet(jet)
    if np.ndim(s) == 0:
        return complex(s)
    return s


def schwarzian_grid(f: Expr, z):
    """Masked variant: returns (values, valid) with poles and critical
    points marked invalid instead of raising."""
    jet = eval_jet(f, z, order=3, masked=True)
    crit = _critical_mask(jet)
    c1 = np.where(crit, 1.0, jet.coeffs[1])
    s = 6.0 * (jet.coeffs[1] * jet.coeffs[3] - jet.coeffs[2] ** 2) / (c1 * c1)
    valid = jet.valid & ~crit & np.isfinite(s)
    return s, valid


def composition_residual(f: Expr, t: Expr, z) -> float:
    """|S(f o T)(z) - S f(T(z)) T'(z)^2|, which vanishes for Mobius T."""
    lhs = schwarzian(Compose(f, t), z)
    t_jet = eval_jet(t, z, order=1)
    rhs = schwarzian(f, complex(t_jet.value)) * complex(t_jet.coeffs[1]) ** 2
    return abs(lhs - rhs)


def uniform_bound_from_radius(r: float) -> float:
    """Norm cap 6 / r^2 for a map injective on every pseudohyperbolic
    disk of radius r."""
    if not 0 < r <= 1:
        raise DomainError("radius must lie in (0, 1]")
    return 6.0 / (r * r)


# ---------------------------------------------------------------------------
# Nehari profiles


@dataclass(frozen=True)
class NehariProfile:
    """Positive even comparison profile p on (-1, 1)."""

    kind: str
    p: Callable


NEHARI_QUADRATIC = NehariProfile("nehari_quadratic", lambda x: (1.0 - np.asarray(x, float) ** 2) ** -2.0)
NEHARI_CONSTANT = NehariProfile(
    "nehari_constant", lambda x: np.full(np.shape(x), np.pi**2 / 4.0) if np.ndim(x) else np.pi**2 / 4.0
)
POKORNYI = NehariProfile("pokornyi", lambda x: 2.0 / (1.0 - np.asarray(x, float) ** 2))

PROFILES = {p.kind: p for p in (NEHARI_QUADRATIC, NEHARI_CONSTANT, POKORNYI)}


def check_profile(profile: NehariProfile, n: int = 2000, slack: float = 1e-12) -> bool:
    """Positivity plus (1-x^2)^2 p(x) nonincreasing on a dense grid."""
    x = np.linspace(0.0, 1.0 - 1e-6, n)
    p = np.asarray(profile.p(x), float)
    if not np.all(p > 0):
        return False
    weighted = (1.0 - x**2) ** 2 * p
    return bool(np.all(np.diff(weighted) <= slack * np.maximum(weighted[:-1], 1.0)))


@dataclass
class NehariReport:
    profile: str
    worst_ratio: float
    worst_point: complex
    passed: bool
    skipped: int


def nehari_check(f: Expr, profile: NehariProfile, samples) -> NehariReport:
    """Worst ratio |S f(z)| / (2 p(|z|)) over the samples; passes iff the
    ratio stays below 1 + 1e-12.  Evaluation failures are skipped and
    counted."""
    z = np.asarray(samples, dtype=complex).ravel()
    if np.any(np.abs(z) >= 1.0):
        raise DomainError("samples must lie in the open unit disk")
    s, valid = schwarzian_grid(f, z)
    if not valid.any():
        raise NormEstimationError("no sample point evaluated cleanly")
    ratio = np.abs(s) / (2.0 * np.asarray(profile.p(np.abs(z)), float))
    ratio = np.where(valid, ratio, -np.inf)
    idx = _argmax_lex(ratio, z)
    worst = float(ratio[idx])
    return NehariReport(
        profile=profile.kind,
        worst_ratio=worst,
        worst_point=complex(z[idx]),
        passed=worst <= 1.0 + 1e-12,
        skipped=int((~valid).sum()),
    )


# ---------------------------------------------------------------------------
# Norm estimation


@dataclass(frozen=True)
class GridSpec:
    """Polar sampling grid; radii include 0 and r_max, angles include 0."""

    n_radial: int = 400
    n_angular: int = 400
    r_max: float = 1.0 - 1e-6

    def points(self) -> np.ndarray:
        r = np.linspace(0.0, self.r_max, self.n_radial)
        t = np.linspace(0.0, 2 * np.pi, self.n_angular, endpoint=False)
        return (r[:, None] * np.exp(1j * t)[None, :]).ravel()

    @property
    def resolution(self) -> float:
        return max(self.r_max / (self.n_radial - 1), self.r_max * 2 * np.pi / self.n_angular)


@dataclass
class NormEstimate:
    """Certified lower bound for sup (1-|z|^2)^2 |S f(z)|."""

    lower_bound: float
    attaining_point: complex
    grid_resolution: float
    refined: bool
    skipped: int = 0


def _argmax_lex(values: np.ndarray, points: np.ndarray) -> int:
    """Index of the maximum; exact ties resolved by lexicographic (re, im)."""
    best = np.max(values)
    tied = np.flatnonzero(values == best)
    if len(tied) == 1:
        return int(tied[0])
    order = np.lexsort((points[tied].imag, points[tied].real))
    return int(tied[order[0]])


def _line_max(fn, center, halfwidth, lo, hi, rounds=9, n=33):
    """Vectorized bracket shrinking for a 1-d maximum of fn on [lo, hi]."""
    c, w = center, halfwidth
    best_x, best_v = c, fn(np.asarray([c]))[0]
    for _ in range(rounds):
        xs = np.linspace(max(lo, c - w), min(hi, c + w), n)
        vs = fn(xs)
        k = int(np.argmax(vs))
        if vs[k] > best_v:
            best_v = vs[k]
            best_x = xs[k]
        c = xs[k]
        w = 2.0 * (xs[1] - xs[0])
    return best_x, best_v


def _polar_ascent(objective, z0: complex, dr: float, dtheta: float, rounds: int = 16):
    """Alternating radial/angular line searches from a grid maximum.

    Near-boundary ridges of pulled-back norm integrands meet the circle
    radially, so polar moves track them where Cartesian steps stall.  A
    move is only accepted when it does not lose value; otherwise the
    window shrinks, which keeps a coarsely sampled boundary spike from
    dragging the iterate off a ridge it has already found.
    """
    r = abs(z0)
    theta = float(np.angle(z0))
    cur_v = float(objective(np.asarray([z0]))[0])
    wt, wr = 3.0 * dtheta, 3.0 * dr
    for _ in range(rounds):
        cand_t, v = _line_max(
            lambda ts: objective(r * np.exp(1j * ts)), theta, wt, theta - wt, theta + wt
        )
        moved = 0.0
        if v >= cur_v:
            moved = abs(cand_t - theta)
            theta, cur_v = cand_t, float(v)
        wt = min(wt * 2.0, np.pi) if moved >= 0.45 * wt else max(wt * 0.5, 1e-10)
        cand_r, v = _line_max(
            lambda rs: objective(rs * np.exp(1j * theta)), r, wr, 0.0, _R_CAP
        )
        moved = 0.0
        if v >= cur_v:
            moved = abs(cand_r - r)
            r, cur_v = cand_r, float(v)
        wr = min(wr * 2.0, 0.5) if moved >= 0.45 * wr else max(wr * 0.5, 1e-10)
    return complex(r * np.exp(1j * theta)), cur_v


def norm_search(values_fn, grid: GridSpec) -> NormEstimate:
    """Grid sweep plus local ascent for sup of a weighted-Schwarzian field.

    ``values_fn(z)`` maps an ndarray of points to (values, valid).  The
    result is only ever a lower bound on the true supremum.
    """
    z = grid.points()
    vals, valid = values_fn(z)
    skipped = int((~valid).sum())
    if skipped == len(z):
        raise NormEstimationError("every grid point failed to evaluate")
    vals = np.where(valid, vals, -np.inf)
    idx = _argmax_lex(vals, z)

    def masked(zs):
        v, ok = values_fn(np.asarray(zs, dtype=complex))
        return np.where(ok, v, -np.inf)

    # Restarting resets the window adaptation, which lets the ascent keep
    # tracking a curved ridge after its steps have contracted.
    z_best, v_best = complex(z[idx]), float(vals[idx])
    for _ in range(8):
        z_next, v_next = _polar_ascent(
            masked, z_best, grid.r_max / (grid.n_radial - 1), 2 * np.pi / grid.n_angular
        )
        if not v_next > v_best + 1e-10 * (1.0 + abs(v_best)):
            if v_next > v_best:
                z_best, v_best = z_next, v_next
            break
        z_best, v_best = z_next, v_next
    return NormEstimate(
        lower_bound=float(v_best),
        attaining_point=z_best,
        grid_resolution=grid.resolution,
        refined=True,
        skipped=skipped,
    )


def schwarzian_norm_estimate(f: Expr, grid: GridSpec = GridSpec()) -> NormEstimate:
    """Lower bound for the Schwarzian norm sup (1-|z|^2)^2 |S f(z)|."""

    def values(z):
        s, valid = schwarzian_grid(f, z)
        w = (1.0 - np.abs(z) ** 2) ** 2 * np.abs(s)
        return w, valid & np.isfinite(w)

    return norm_search(values, grid)
