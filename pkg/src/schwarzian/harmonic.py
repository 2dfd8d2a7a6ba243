"""Harmonic mappings f = h + conj(g) with dilatation a perfect square.

The map is described by its analytic part h and the dilatation root q,
so g' = q^2 h'.  This module computes the generalized Schwarzian
2 (sigma_zz - sigma_z^2) for sigma = log(|h'| (1 + |q|^2)), its norm, the
shear family over the Koebe function, the convexity quantities for the
analytic part, and the minimal-surface lift with its curvature-weighted
univalence criterion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analytic import GridSpec, NormEstimate, norm_search, schwarzian
from .errors import (
    CriticalPointError,
    DomainError,
    IntegrationError,
    ValenceCountError,
)
from .expr import Compose, Const, Div, Expr, IntPow, Mul, Sub, Var, eval_jet
from .valence import ValenceReport, separation_bound

_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(24)


@dataclass(frozen=True)
class HarmonicMap:
    """Orientation-preserving harmonic map given by (h, q), omega = q^2.

    g is recovered by integrating q^2 h' from the origin, with g(0) = 0.
    """

    h: Expr
    q: Expr

    def h_jet(self, z, order: int = 3, masked: bool = False):
        return eval_jet(self.h, z, order=order, masked=masked)

    def q_jet(self, z, order: int = 2, masked: bool = False):
        return eval_jet(self.q, z, order=order, masked=masked)

    def omega(self, z):
        qv = self.q_jet(z, order=0).value
        return qv * qv

    def validate_at(self, z) -> None:
        qv = np.abs(self.q_jet(z, order=0).value)
        if np.any(qv >= 1.0):
            raise DomainError("dilatation modulus reached 1 at a requested point")
        jet = self.h_jet(z, order=1)
        scale = np.maximum(np.abs(jet.coeffs[0]), np.abs(jet.coeffs[1]))
        if np.any(np.abs(jet.coeffs[1]) <= 1e-12 * scale):
            raise CriticalPointError("h' vanishes at a requested point")

    def gprime_value(self, z):
        hp = self.h_jet(z, order=1).coeffs[1]
        qv = self.q_jet(z, order=0).value
        return qv * qv * hp

    def g(self, z: complex, tol: float = 1e-12) -> complex:
        return _radial_integral(self.gprime_value, z, tol)

    def f(self, z: complex) -> complex:
        h = complex(self.h_jet(z, order=0).value)
        return h + np.conj(self.g(z))

    def compose(self, phi: Expr) -> "HarmonicMap":
        return HarmonicMap(Compose(self.h, phi), Compose(self.q, phi))


def _radial_integral(fn, z: complex, tol: float = 1e-12, max_panels: int = 4096) -> complex:
    """Integral of fn along the straight path 0 -> z by panel-doubling
    Gauss-Legendre quadrature."""
    if z == 0:
        return 0.0 + 0.0j
    previous = None
    panels = 1
    while panels <= max_panels:
        edges = np.linspace(0.0, 1.0, panels + 1)
        mid = 0.5 * (edges[:-1] + edges[1:])
        half = 0.5 * (edges[1] - edges[0])
        t = (mid[:, None] + half * _GAUSS_NODES[None, :]).ravel()
        values = fn(t * z)
        total = complex(np.sum(values.reshape(panels, -1) @ _GAUSS_WEIGHTS) * half * z)
        if previous is not None and abs(total - previous) <= tol * (1.0 + abs(total)):
            return total
        previous = total
        panels *= 2
    raise IntegrationError("path quadrature failed to converge")


@dataclass
class SigmaJet:
    """Conformal-factor logarithm sigma and its Wirtinger derivatives."""

    sigma: float
    sigma_z: complex
    sigma_zz: complex


def _sigma_parts(hj, qj):
    """sigma_z and sigma_zz from jets of h (order 3) and q (order 2).

    sigma = Re log h' + log(1 + |q|^2) gives
      sigma_z  = h''/(2h') + conj(q) q' / (1 + |q|^2)
      sigma_zz = (h''' h' - h''^2)/(2 h'^2)
                 + conj(q) q'' / (1 + |q|^2)
                 - conj(q)^2 q'^2 / (1 + |q|^2)^2
    """
    hp, hpp, hppp = hj.coeffs[1], 2.0 * hj.coeffs[2], 6.0 * hj.coeffs[3]
    qv, qp, qpp = qj.coeffs[0], qj.coeffs[1], 2.0 * qj.coeffs[2]
    qbar = np.conj(qv)
    denom = 1.0 + np.abs(qv) ** 2
    sigma_z = hpp / (2.0 * hp) + qbar * qp / denom
    sigma_zz = (
        (hppp * hp - hpp * hpp) / (2.0 * hp * hp)
        + qbar * qpp / denom
        - (qbar * qp / denom) ** 2
    )
    return sigma_z, sigma_zz


def sigma_jet(hmap: HarmonicMap, z) -> SigmaJet:
    hmap.validate_at(z)
    hj = hmap.h_jet(z, order=3)
    qj = hmap.q_jet(z, order=2)
    sigma = float(np.log(np.abs(hj.coeffs[1]) * (1.0 + np.abs(qj.coeffs[0]) ** 2)))
    sigma_z, sigma_zz = _sigma_parts(hj, qj)
    return SigmaJet(sigma=sigma, sigma_z=complex(sigma_z), sigma_zz=complex(sigma_zz))


def harmonic_schwarzian(hmap: HarmonicMap, z):
    """2 (sigma_zz - sigma_z^2); reduces to the classical Schwarzian of h
    when q is identically zero."""
    hmap.validate_at(z)
    hj = hmap.h_jet(z, order=3)
    qj = hmap.q_jet(z, order=2)
    sigma_z, sigma_zz = _sigma_parts(hj, qj)
    s = 2.0 * (sigma_zz - sigma_z * sigma_z)
    if np.ndim(s) == 0:
        return complex(s)
    return s


def _harmonic_schwarzian_grid(hmap: HarmonicMap, z):
    hj = hmap.h_jet(z, order=3, masked=True)
    qj = hmap.q_jet(z, order=2, masked=True)
    scale = np.maximum(np.abs(hj.coeffs[0]), np.abs(hj.coeffs[1]))
    crit = np.abs(hj.coeffs[1]) <= 1e-12 * scale
    hj.coeffs[1] = np.where(crit, 1.0, hj.coeffs[1])
    sigma_z, sigma_zz = _sigma_parts(hj, qj)
    s = 2.0 * (sigma_zz - sigma_z * sigma_z)
    valid = hj.valid & qj.valid & ~crit & (np.abs(qj.coeffs[0]) < 1.0) & np.isfinite(s)
    return s, valid


def harmonic_composition_residual(hmap: HarmonicMap, phi: Expr, z) -> float:
    """|S(f o phi)(z) - S f(phi(z)) phi'(z)^2 - S phi(z)|."""
    lhs = harmonic_schwarzian(hmap.compose(phi), z)
    pj = eval_jet(phi, z, order=3)
    rhs = (
        harmonic_schwarzian(hmap, complex(pj.value)) * complex(pj.coeffs[1]) ** 2
        + schwarzian(phi, z)
    )
    return abs(lhs - rhs)


def harmonic_norm_estimate(hmap: HarmonicMap, grid: GridSpec = GridSpec()) -> NormEstimate:
    """Lower bound for sup (1-|z|^2)^2 |S f(z)| over the disk."""

    def values(z):
        s, valid = _harmonic_schwarzian_grid(hmap, z)
        w = (1.0 - np.abs(z) ** 2) ** 2 * np.abs(s)
        return w, valid & np.isfinite(w)

    return norm_search(values, grid)


# ---------------------------------------------------------------------------
# Shears of the Koebe function


def shear_koebe(theta: float = 0.0) -> HarmonicMap:
    """Shear of k(z) = z/(1-z)^2 with dilatation e^{i theta} z^2.

    At theta = 0 this is the horizontal shear with h - g = k, which has
    h' = (1-z)^{-4}.  The rotated dilatations come from precomposing that
    shear with the disk rotation z -> e^{i theta/2} z, so h - g = k(eta z)
    with eta = e^{i theta/2}; rotation is a disk automorphism, which is
    what keeps the Schwarzian norm at its theta = 0 value.
    """
    if not 0 <= theta < 2 * math.pi:
        raise DomainError("theta must lie in [0, 2 pi)")
    eta = complex(np.exp(0.5j * theta))
    q = Mul(Const(eta), Var())
    one = Const(1 + 0j)
    h = Div(Sub(IntPow(Sub(one, Mul(Const(eta), Var())), -3), one), Const(3 + 0j))
    return HarmonicMap(h=h, q=q)


# ---------------------------------------------------------------------------
# Norm and convexity quantities for the analytic part


def pommerenke_bound(norm_h: float) -> float:
    """Norm cap ||S f|| <= ||S h|| + 2 (1 + ||S h||/2)^{1/2} + 7."""
    if norm_h < 0:
        raise DomainError("a Schwarzian norm cannot be negative")
    return norm_h + 2.0 * math.sqrt(1.0 + 0.5 * norm_h) + 7.0


def convexity_indicator(h: Expr, z) -> float:
    """Re(1 + z h''(z)/h'(z)); positive exactly where h is locally convex."""
    jet = eval_jet(h, z, order=2)
    scale = np.maximum(np.abs(jet.coeffs[0]), np.abs(jet.coeffs[1]))
    if np.any(np.abs(jet.coeffs[1]) <= 1e-12 * scale):
        raise CriticalPointError("h' vanishes at a requested point")
    value = 1.0 + np.asarray(z) * (2.0 * jet.coeffs[2]) / jet.coeffs[1]
    if np.ndim(value) == 0:
        return float(value.real)
    return value.real


def convexity_floor(rho: float, lam: float) -> float:
    """(1 - 2 lambda rho + rho^2) / (1 - rho^2); positive iff rho < mu(lambda)."""
    if not 0 <= rho < 1:
        raise DomainError("need 0 <= rho < 1")
    if lam < 1:
        raise DomainError("the coefficient bound lambda is at least 1")
    return (1.0 - 2.0 * lam * rho + rho * rho) / (1.0 - rho * rho)


def mu(lam: float) -> float:
    """Convexity radius lambda - sqrt(lambda^2 - 1) for coefficient bound lambda."""
    if lam < 1:
        raise DomainError("the coefficient bound lambda is at least 1")
    return lam - math.sqrt(lam * lam - 1.0)


def schwarz_transform_coefficient(h: Expr, zeta: complex) -> complex:
    """Second-coefficient engine (1 - |zeta|^2) h''(zeta)/h'(zeta) - 2 conj(zeta)
    of the renormalized disk automorphism pullback."""
    jet = eval_jet(h, zeta, order=2)
    scale = max(abs(complex(jet.coeffs[0])), abs(complex(jet.coeffs[1])))
    if np.abs(jet.coeffs[1]) <= 1e-12 * scale:
        raise CriticalPointError("h' vanishes at the requested point")
    return complex(
        (1.0 - abs(zeta) ** 2) * (2.0 * jet.coeffs[2]) / jet.coeffs[1] - 2.0 * np.conj(zeta)
    )


# ---------------------------------------------------------------------------
# Minimal-surface lift


@dataclass
class LiftSample:
    """One point of the conformal minimal-surface lift."""

    point: complex
    coords: np.ndarray
    conformal_factor: float
    curvature_density: float
    conformality_residual: float | None = None


def _lift_coords(hmap: HarmonicMap, z: complex) -> np.ndarray:
    h = complex(hmap.h_jet(z, order=0).value)
    g = hmap.g(z)
    planar = h + np.conj(g)

    def height_integrand(zz):
        hj = hmap.h_jet(zz, order=1)
        return hmap.q_jet(zz, order=0).value * hj.coeffs[1]

    height = 2.0 * _radial_integral(height_integrand, z).imag if z != 0 else 0.0
    return np.array([planar.real, planar.imag, height])


def lift(hmap: HarmonicMap, z: complex, check: bool = True, fd_step: float = 1e-4) -> LiftSample:
    """Lift coordinates (Re f, Im f, 2 Im int_0^z q h' dzeta) at z.

    With check=True the conformality of the induced metric is verified with
    numeric partials: |d_x lift| = |d_y lift| = e^sigma and orthogonality,
    each to 1e-6, which exposes any path-quadrature drift.
    """
    hmap.validate_at(z)
    coords = _lift_coords(hmap, z)
    hp = complex(hmap.h_jet(z, order=1).coeffs[1])
    qv = complex(hmap.q_jet(z, order=0).value)
    factor = abs(hp) * (1.0 + abs(qv) ** 2)
    residual = None
    if check:
        px = (_lift_coords(hmap, z + fd_step) - _lift_coords(hmap, z - fd_step)) / (2 * fd_step)
        py = (_lift_coords(hmap, z + 1j * fd_step) - _lift_coords(hmap, z - 1j * fd_step)) / (
            2 * fd_step
        )
        residual = max(
            abs(np.linalg.norm(px) - factor) / max(factor, 1.0),
            abs(np.linalg.norm(py) - factor) / max(factor, 1.0),
            abs(float(px @ py)) / max(factor**2, 1.0),
        )
        if residual > 1e-6:
            raise IntegrationError(
                f"lift conformality residual {residual:.2e}; path quadrature off tolerance"
            )
    return LiftSample(
        point=complex(z),
        coords=coords,
        conformal_factor=factor,
        curvature_density=curvature_density(hmap, z),
        conformality_residual=residual,
    )


def curvature_density(hmap: HarmonicMap, z) -> float:
    """e^{2 sigma} |K| = 4 |q'|^2 / (1 + |q|^2)^2 on the lift surface."""
    qj = hmap.q_jet(z, order=1)
    qv, qp = qj.coeffs[0], qj.coeffs[1]
    value = 4.0 * np.abs(qp) ** 2 / (1.0 + np.abs(qv) ** 2) ** 2
    if np.ndim(value) == 0:
        return float(value)
    return value


def lift_criterion_value(hmap: HarmonicMap, z) -> float:
    """|S f(z)| + e^{2 sigma}|K|, the quantity the lift univalence and
    valence tests compare against C, 2C/(1-|z|^2), or 2 p(|z|)."""
    value = np.abs(harmonic_schwarzian(hmap, z)) + curvature_density(hmap, z)
    if np.ndim(value) == 0:
        return float(value)
    return value


@dataclass
class CriterionReport:
    mode: str
    bound: float | str
    worst_ratio: float
    worst_point: complex

    @property
    def passed(self) -> bool:
        return self.worst_ratio <= 1.0 + 1e-12


def lift_criterion_report(
    hmap: HarmonicMap, samples, C: float | None = None, profile=None, growth: bool = False
) -> CriterionReport:
    """Worst ratio of the lift criterion against a constant bound C, the
    growth bound 2C/(1-|z|^2), or a profile bound 2 p(|z|)."""
    z = np.asarray(samples, dtype=complex).ravel()
    values = np.array([lift_criterion_value(hmap, complex(p)) for p in z])
    if profile is not None:
        bound = 2.0 * np.asarray(profile.p(np.abs(z)), float)
        mode, label = "profile", profile.kind
    elif growth:
        if C is None:
            raise DomainError("growth mode needs C")
        bound = 2.0 * C / (1.0 - np.abs(z) ** 2)
        mode, label = "growth", C
    else:
        if C is None:
            raise DomainError("constant mode needs C")
        bound = np.full(len(z), float(C))
        mode, label = "constant", C
    ratio = values / bound
    idx = int(np.argmax(ratio))
    return CriterionReport(
        mode=mode, bound=label, worst_ratio=float(ratio[idx]), worst_point=complex(z[idx])
    )


# ---------------------------------------------------------------------------
# Planar preimages


def harmonic_preimages(
    hmap: HarmonicMap,
    w: complex,
    grid: GridSpec = GridSpec(24, 48, 0.9),
    C: float | None = None,
) -> ValenceReport:
    """Planar preimages of w under f = h + conj(g) by Newton iteration on
    the Wirtinger system from grid seeds.

    Diverging seeds are dropped.  When a criterion constant C is supplied,
    the separation of distinct preimages is compared against the
    constant-context bound and a violation raises.
    """
    w = complex(w)
    seeds = grid.points()
    seeds = seeds[np.abs(seeds) <= grid.r_max]

    z = seeds.astype(complex)
    g_running = np.array([hmap.g(complex(p)) for p in z])
    alive = np.ones(len(z), dtype=bool)
    for _ in range(40):
        hj = hmap.h_jet(z, order=1, masked=True)
        qj = hmap.q_jet(z, order=0, masked=True)
        gp = np.conj(qj.coeffs[0] ** 2 * hj.coeffs[1])
        fval = hj.coeffs[0] + np.conj(g_running) - w
        jac = np.abs(hj.coeffs[1]) ** 2 - np.abs(gp) ** 2
        ok = hj.valid & qj.valid & np.isfinite(fval) & (np.abs(jac) > 1e-300)
        delta = np.where(
            ok,
            (np.conj(hj.coeffs[1]) * (-fval) - gp * np.conj(-fval)) / np.where(ok, jac, 1.0),
            0.0,
        )
        z_new = z + np.where(alive, delta, 0.0)
        inside = np.abs(z_new) <= min(0.98, grid.r_max + 0.05)
        z_new = np.where(inside, z_new, z)
        moved = alive & ok & inside & (np.abs(z_new - z) > 0)
        if moved.any():
            g_running[moved] += _segment_integrals(hmap, z[moved], z_new[moved])
        z = z_new
        alive = alive & ok & inside

    candidates = []
    for p in z[alive]:
        p = complex(p)
        value = hmap.f(p) - w
        if abs(value) < 1e-8 * (1.0 + abs(w)):
            candidates.append(p)
    reps: list[complex] = []
    for p in sorted(candidates, key=lambda q: (q.real, q.imag)):
        if all(abs(p - q) > 1e-6 for q in reps):
            reps.append(p)

    seps = [abs(a - b) for i, a in enumerate(reps) for b in reps[i + 1 :]]
    min_sep = min(seps) if seps else None
    if C is not None and min_sep is not None and min_sep < separation_bound(C) - 1e-9:
        raise ValenceCountError(
            f"preimages at distance {min_sep:.6f} violate the separation bound for C={C}"
        )
    return ValenceReport(
        w=w,
        radius=float(grid.r_max),
        count=len(reps),
        preimages=reps,
        min_separation=min_sep,
    )


def _segment_integrals(hmap: HarmonicMap, z0: np.ndarray, z1: np.ndarray) -> np.ndarray:
    """g increments along straight segments z0[i] -> z1[i] in one batched
    Gauss-Legendre pass; Newton steps are short, so one panel suffices."""
    mid = 0.5 * (z0 + z1)
    half = 0.5 * (z1 - z0)
    pts = mid[:, None] + half[:, None] * _GAUSS_NODES[None, :]
    vals = hmap.gprime_value(pts)
    return (vals @ _GAUSS_WEIGHTS) * half
