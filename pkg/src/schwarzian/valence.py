"""Valence bounds for bounded and slowly growing Schwarzians.

Separation and packing bounds for the constant case, the annulus
recurrence pipeline for the 2C/(1-|z|^2) growth case, and empirical
preimage counting through the argument principle.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .errors import DomainError, IntegrationError, ValenceCountError
from .expr import Expr, eval_jet
from .geometry import rectangle_count

_HALF_PI_SQ = math.pi**2 / 2.0


@dataclass(frozen=True)
class BoundConfig:
    """Context for a Schwarzian bound: |S f| <= C (constant) or
    |S f| <= 2C/(1-|z|^2) (growth)."""

    C: float
    context: str = "constant"

    def __post_init__(self):
        if self.context not in ("constant", "growth"):
            raise DomainError("context must be 'constant' or 'growth'")
        if self.context == "constant" and self.C < _HALF_PI_SQ:
            raise DomainError("constant context needs C >= pi^2/2")
        if self.context == "growth" and self.C <= 2.0:
            raise DomainError("growth context needs C > 2")

    @property
    def epsilon(self) -> float:
        return math.pi / (2.0 * math.sqrt(self.C))


def separation_bound(C: float) -> float:
    """Minimum distance pi sqrt(2/C) between equal-value points when
    |S f| <= C."""
    if C <= 0:
        raise DomainError("need C > 0")
    return math.pi * math.sqrt(2.0 / C)


def valence_bound_const(C: float) -> float:
    """Packing bound (1 + sqrt(2C)/pi)^2 on the valence when |S f| <= C.

    Inputs within 1e-6 of the threshold pi^2/2 snap to it, so the sharp
    boundary case stays reachable from decimal command-line input.
    """
    if abs(C - _HALF_PI_SQ) <= 1e-6:
        C = _HALF_PI_SQ
    if C < _HALF_PI_SQ:
        raise DomainError("constant context needs C >= pi^2/2")
    return (1.0 + math.sqrt(2.0 * C) / math.pi) ** 2


def valence_bound_cap(C: float) -> int:
    """Integer form of the packing bound."""
    return int(math.floor(valence_bound_const(C)))


def annulus_packing_bound(d: float) -> int:
    """At most floor(2 pi / d) points fit in an annulus of width d with
    pairwise separation 2d."""
    if not 0 < d <= 1:
        raise DomainError("annulus width must lie in (0, 1]")
    return int(math.floor(2.0 * math.pi / d))


@dataclass
class ValenceReport:
    """Preimage census of one target value."""

    w: complex
    radius: float
    count: int
    preimages: list
    min_separation: float | None
    winding: int | None = None
    winding_residual: float | None = None
    n_poles: int = 0


def tan_zero_census(C: float) -> ValenceReport:
    """Zeros of tan(sqrt(C/2) z) inside the unit disk: the real points
    k pi sqrt(2/C), |x| < 1, spaced exactly one separation bound apart."""
    if C <= _HALF_PI_SQ:
        raise DomainError("census needs C > pi^2/2")
    gap = separation_bound(C)
    ks = np.arange(0, int(math.ceil(1.0 / gap)) + 1)
    xs = ks * gap
    xs = xs[xs < 1.0]
    points = sorted({complex(x) for x in np.concatenate([-xs, xs])}, key=lambda z: z.real)
    count = len(points)
    lower = math.sqrt(2.0 * C) / math.pi - 1.0
    if not lower <= count <= valence_bound_const(C):
        raise DomainError(f"census count {count} escaped its envelope at C={C}")
    return ValenceReport(
        w=0.0,
        radius=1.0,
        count=count,
        preimages=points,
        min_separation=gap if count >= 2 else None,
    )


@dataclass
class PackingCheck:
    passed: bool
    separation_ok: bool
    count_ok: bool
    vacuous: bool
    separation_bound: float
    count_bound: float


def packing_check(report: ValenceReport, C: float) -> PackingCheck:
    """Verify a census against the separation and packing bounds for a
    function with |S f| <= C."""
    sep = separation_bound(C)
    cap = valence_bound_const(C)
    vacuous = report.count < 2
    sep_ok = vacuous or report.min_separation >= sep - 1e-9
    count_ok = report.count <= cap + 1e-9
    return PackingCheck(
        passed=sep_ok and count_ok,
        separation_ok=sep_ok,
        count_ok=count_ok,
        vacuous=vacuous,
        separation_bound=sep,
        count_bound=cap,
    )


# ---------------------------------------------------------------------------
# Argument-principle counting


def _newton_sweep(f: Expr, w: complex, seeds: np.ndarray, r: float, attract: bool):
    """Batched Newton iteration; attract=False finds zeros of f - w, True
    finds poles (zeros of 1/(f - w))."""
    z = seeds.astype(complex)
    alive = np.ones(len(z), dtype=bool)
    for _ in range(60):
        jet = eval_jet(f, z, order=1, masked=True)
        val = jet.coeffs[0] - w
        der = jet.coeffs[1]
        ok = jet.valid & np.isfinite(val) & np.isfinite(der) & (np.abs(der) > 1e-300)
        step = np.where(ok, val / np.where(ok, der, 1.0), 0.0)
        if attract:
            step = -step
        z = np.where(alive & ok, z - step, z)
        alive = alive & ok & (np.abs(z) < 1.2 * r)
    return z[alive]


def _cluster(points: np.ndarray, tol: float) -> list[complex]:
    reps: list[complex] = []
    for p in sorted(points, key=lambda q: (q.real, q.imag)):
        if all(abs(p - q) > tol for q in reps):
            reps.append(complex(p))
    return reps


def _local_winding(f: Expr, w: complex, center: complex, radius: float, nodes: int = 512) -> int:
    """Winding of f - w on a small circle: multiplicity at a zero, minus
    the order at a pole."""
    t = np.exp(2j * np.pi * np.arange(nodes) / nodes)
    zc = center + radius * t
    jet = eval_jet(f, zc, order=1)
    integral = complex(np.mean((zc - center) * jet.coeffs[1] / (jet.coeffs[0] - w)))
    if abs(integral - round(integral.real)) >= 0.01:
        raise ValenceCountError(f"local winding did not settle near {center:.6f}")
    return int(round(integral.real))


def _multiplicities(f: Expr, w: complex, points: list[complex], r: float) -> list[int]:
    radius = 1e-4
    if len(points) > 1:
        gaps = [abs(a - b) for i, a in enumerate(points) for b in points[i + 1 :]]
        radius = min(radius, 0.4 * min(gaps))
    return [_local_winding(f, w, p, min(radius, r - abs(p) - 1e-6)) for p in points]


def count_valence(f: Expr, w: complex, r: float, nodes: int = 4096) -> ValenceReport:
    """Count solutions of f(z) = w in |z| < r.

    The winding number of f - w around the contour |z| = r comes from
    trapezoidal quadrature (doubled until its distance to an integer drops
    below 0.01); preimages come from seeded Newton refinement.  Poles of f
    inside the contour are located the same way so the books balance as
    zeros - poles = winding.
    """
    w = complex(w)
    n = nodes
    integral = None
    for _ in range(4):
        t = np.exp(2j * np.pi * np.arange(n) / n)
        zc = r * t
        jet = eval_jet(f, zc, order=1)
        fv = jet.coeffs[0] - w
        if np.min(np.abs(fv)) < 1e-6 * max(1.0, float(np.median(np.abs(fv)))):
            raise ValenceCountError(
                "a root sits within 1e-6 of the contour; perturb the radius"
            )
        integral = complex(np.mean(zc * jet.coeffs[1] / fv))
        if abs(integral - round(integral.real)) < 0.01:
            break
        n *= 2
    residual = abs(integral - round(integral.real))
    integral = integral.real
    if residual >= 0.01:
        raise ValenceCountError(f"winding residual {residual:.3f} after {n} nodes")
    winding = int(round(integral))

    rr = np.linspace(0.05 * r, 0.97 * r, 24)
    tt = np.exp(2j * np.pi * np.arange(48) / 48)
    seeds = np.concatenate([[0.0], (rr[:, None] * tt[None, :]).ravel()])
    finals = _newton_sweep(f, w, seeds, r, attract=False)
    if len(finals):
        val = np.abs(eval_jet(f, finals, order=0, masked=True).coeffs[0] - w)
        scale = 1.0 + abs(w)
        finals = finals[np.isfinite(val) & (val < 1e-8 * scale) & (np.abs(finals) < r - 1e-6)]
    roots = _cluster(finals, 1e-6)

    mults = _multiplicities(f, w, roots, r)
    zero_total = sum(mults)
    poles: list[complex] = []
    pole_total = 0
    if zero_total != winding:
        pole_candidates = _newton_sweep(f, w, seeds, r, attract=True)
        if len(pole_candidates):
            big = np.abs(eval_jet(f, pole_candidates, order=0, masked=True).coeffs[0])
            pole_candidates = pole_candidates[
                np.isfinite(big) & (big > 1e8) & (np.abs(pole_candidates) < r - 1e-6)
            ]
        poles = _cluster(pole_candidates, 1e-6)
        pole_total = -sum(_multiplicities(f, w, poles, r))
    if zero_total - pole_total != winding:
        raise ValenceCountError(
            f"located zeros of total multiplicity {zero_total} and poles of total "
            f"order {pole_total} against winding {winding}"
        )

    seps = [abs(a - b) for i, a in enumerate(roots) for b in roots[i + 1 :]]
    return ValenceReport(
        w=w,
        radius=float(r),
        count=len(roots),
        preimages=roots,
        min_separation=min(seps) if seps else None,
        winding=winding,
        winding_residual=residual,
        n_poles=len(poles),
    )


# ---------------------------------------------------------------------------
# The growth-context pipeline


def next_radius(a: float, eps: float) -> tuple[float, float]:
    """Solve x - a = eps sqrt(1 - x^2) for x > a; returns (x, x - a)."""
    if not 0 <= a < 1:
        raise DomainError("need 0 <= a < 1")
    if eps <= 0:
        raise DomainError("need eps > 0")
    x = (a + eps * math.sqrt(1.0 - a * a + eps * eps)) / (1.0 + eps * eps)
    d = x - a
    if abs(d - eps * math.sqrt(1.0 - x * x)) > 1e-12:
        raise IntegrationError("radius step lost its defining identity")
    return x, d


def phi_step(a: float, eps: float) -> float:
    """Reciprocal step length 1/(x - a) of the radius recurrence, as an
    explicit increasing function of a."""
    if not 0 <= a < 1:
        raise DomainError("need 0 <= a < 1")
    if eps <= 0:
        raise DomainError("need eps > 0")
    return (math.sqrt(1.0 - a * a + eps * eps) + eps * a) / (eps * (1.0 - a * a))


def integral_estimates(C: float) -> tuple[float, float, float]:
    """Adaptive quadrature of the three pieces of int_0^R phi(x)^2 dx.

    I1 = eps^-2 int dx/(1-x^2), I2 = int (1+x^2)/(1-x^2)^2, and I3 carries
    the cross term; each is checked against its analytic envelope.
    """
    if C <= 2:
        raise DomainError("growth context needs C > 2")
    eps = math.pi / (2.0 * math.sqrt(C))
    r_outer = math.sqrt(1.0 - 1.0 / (4.0 * C))
    mid = r_outer - (1.0 - r_outer) / 2.0

    def piece(fn):
        total = 0.0
        for lo, hi in ((0.0, mid), (mid, r_outer)):
            value, _ = quad(fn, lo, hi, epsrel=1e-8, limit=200)
            total += value
        return total

    i1 = piece(lambda x: 1.0 / (1.0 - x * x)) / eps**2
    i2 = piece(lambda x: (1.0 + x * x) / (1.0 - x * x) ** 2)
    i3 = piece(lambda x: x * math.sqrt(1.0 + eps * eps - x * x) / (1.0 - x * x) ** 2) * 2.0 / eps

    if i1 > (2.0 * C / math.pi**2) * math.log(16.0 * C) + 1e-6:
        raise IntegrationError("I1 exceeded its logarithmic envelope")
    if i2 > 2.0 / (1.0 - r_outer**2) + 1.0:
        raise IntegrationError("I2 exceeded its linear envelope")
    if not math.isfinite(i3):
        raise IntegrationError("I3 diverged")
    return i1, i2, i3


@dataclass
class BoundBreakdown:
    """Full ledger of the growth-context valence bound at one C."""

    C: float
    epsilon: float
    r0: float
    radii: list
    gaps: list
    m: int
    R: float
    R1: float
    per_annulus_counts: list
    gap_annulus_count: int
    rectangle_count: int
    total: int
    envelope: float
    inner_unit: int = 1
    integrals: tuple = field(default=(0.0, 0.0, 0.0))

    @property
    def inner_sum(self) -> int:
        return int(sum(self.per_annulus_counts))

    @property
    def ratio(self) -> float:
        return self.total / (self.C * math.log(self.C))


def valence_breakdown(C: float) -> BoundBreakdown:
    """Assemble the growth-context valence bound at constant C > 2.

    One count for the inner disk of univalence, floor(2 pi / d_k) per
    recurrence annulus, a final partial annulus up to R, and the
    tangent-geodesic rectangle count beyond R.  The annulus sum is checked
    against the quadrature envelope 2 pi int_0^R phi^2.
    """
    if not 2.0 < C <= 1e6:
        raise DomainError("supported range is 2 < C <= 1e6")
    eps = math.pi / (2.0 * math.sqrt(C))
    r0 = math.pi / math.sqrt(math.pi**2 + 4.0 * C)
    r_outer = math.sqrt(1.0 - 1.0 / (4.0 * C))
    r_inner_cap = math.sqrt(1.0 - 1.0 / (2.0 * C))

    radii = [r0]
    gaps: list[float] = []
    counts: list[int] = []
    while True:
        x, d = next_radius(radii[-1], eps)
        if d < 1e-12:
            raise IntegrationError("radius recurrence stagnated")
        if x > r_outer:
            break
        radii.append(x)
        gaps.append(d)
        counts.append(annulus_packing_bound(d))
    m = len(gaps)

    p_outer = 2.0 / (1.0 - r_outer**2)
    gap_count = int(math.ceil(2.0 * math.sqrt(2.0 * C * p_outer))) if radii[-1] < r_outer else 0
    rect = rectangle_count(C)
    total = 1 + sum(counts) + gap_count + rect

    integrals = integral_estimates(C)
    envelope = 1.0 + 2.0 * math.pi * sum(integrals)
    if sum(counts) > 1.01 * (envelope - 1.0):
        raise IntegrationError("annulus counts exceeded the quadrature envelope")

    return BoundBreakdown(
        C=float(C),
        epsilon=eps,
        r0=r0,
        radii=radii,
        gaps=gaps,
        m=m,
        R=r_outer,
        R1=r_inner_cap,
        per_annulus_counts=counts,
        gap_annulus_count=gap_count,
        rectangle_count=rect,
        total=total,
        envelope=envelope,
        integrals=integrals,
    )


SWEEP_COLUMNS = (
    "C",
    "r0",
    "m",
    "R",
    "R1",
    "inner_sum",
    "gap_count",
    "rect_count",
    "total",
    "total_over_ClogC",
)


def breakdown_sweep(C_values, max_workers: int = 1) -> list[BoundBreakdown]:
    """Breakdowns for several C, ordered by C regardless of scheduling."""
    cs = sorted(float(c) for c in C_values)
    if max_workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            results = list(pool.map(valence_breakdown, cs))
    else:
        results = [valence_breakdown(c) for c in cs]
    return results


def sweep_rows(breakdowns) -> list[dict]:
    rows = []
    for b in breakdowns:
        rows.append(
            {
                "C": b.C,
                "r0": b.r0,
                "m": b.m,
                "R": b.R,
                "R1": b.R1,
                "inner_sum": b.inner_sum,
                "gap_count": b.gap_annulus_count,
                "rect_count": b.rectangle_count,
                "total": b.total,
                "total_over_ClogC": b.ratio,
            }
        )
    return rows


def sweep_to_csv(breakdowns, path) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=SWEEP_COLUMNS)
        writer.writeheader()
        for row in sweep_rows(breakdowns):
            writer.writerow(row)
