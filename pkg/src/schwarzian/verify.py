"""Acceptance suite: every shipped numerical contract at its tolerance.

Each check returns a CheckResult whose ``measured`` value is the worst
sub-measurement, so the CLI table and the test suite share one source of
truth.  Checks are deterministic for a fixed seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analytic import (
    NEHARI_CONSTANT,
    NEHARI_QUADRATIC,
    POKORNYI,
    schwarzian,
    schwarzian_norm_estimate,
)
from .expr import Compose, Const, eval_jet, koebe, parse, tan_scaled
from .geometry import MobiusSelfMap, geodesic_rectangle, pseudo_disk, rho
from .harmonic import (
    HarmonicMap,
    curvature_density,
    harmonic_composition_residual,
    harmonic_norm_estimate,
    harmonic_schwarzian,
    lift,
    lift_criterion_value,
    pommerenke_bound,
    shear_koebe,
)
from .sturm import (
    DEFAULT_SEED,
    SegmentPath,
    disconjugacy_check,
    find_zeros,
    integrate_segment,
    legendre_lower_bound,
    modulus_convexity_residual,
)
from .valence import (
    count_valence,
    integral_estimates,
    packing_check,
    phi_step,
    separation_bound,
    tan_zero_census,
    valence_bound_const,
    valence_breakdown,
)

SWEEP_CS = (4.0, 16.0, 64.0, 256.0, 1024.0)


@dataclass
class CheckResult:
    name: str
    passed: bool
    measured: float
    bound: float
    tolerance: float
    detail: str = ""


def _disk_points(rng, n, r_max=0.85):
    radius = r_max * np.sqrt(rng.uniform(size=n))
    return radius * np.exp(2j * np.pi * rng.uniform(size=n))


def check_schwarzian_closed_forms(rng) -> CheckResult:
    """|S koebe + 6/(1-z^2)^2| relative error and |S tan_scaled(C) - C|."""
    z = _disk_points(rng, 200, 0.9)
    target = -6.0 / (1.0 - z**2) ** 2
    s = np.array([schwarzian(koebe(), complex(p)) for p in z])
    worst = float(np.max(np.abs(s - target) / np.abs(target)))

    worst_tan = 0.0
    for c in (5.0, math.pi**2 / 2.0, 200.0):
        f = tan_scaled(c)
        gap = separation_bound(c)
        poles = np.arange(gap / 2.0, 1.5, gap)
        pts = []
        while len(pts) < 60:
            p = complex(_disk_points(rng, 1, 0.9)[0])
            if np.min(np.abs(p - np.concatenate([poles, -poles]))) > 0.02:
                pts.append(p)
        dev = max(abs(schwarzian(f, p) - c) for p in pts)
        worst_tan = max(worst_tan, dev)
    passed = worst <= 1e-10 and worst_tan <= 1e-9
    return CheckResult(
        name="schwarzian_closed_forms",
        passed=passed,
        measured=max(worst, worst_tan),
        bound=0.0,
        tolerance=1e-9,
        detail=f"koebe rel {worst:.2e}; tan abs {worst_tan:.2e}",
    )


def check_norm_estimates(rng) -> CheckResult:
    """Koebe norm 6, sheared-Koebe norm 16, and invariance under 20
    random disk automorphisms."""
    dev_koebe = abs(schwarzian_norm_estimate(koebe()).lower_bound - 6.0)
    shear = shear_koebe(0.0)
    dev_shear = abs(harmonic_norm_estimate(shear).lower_bound - 16.0)
    dev_inv = 0.0
    for _ in range(20):
        phi = MobiusSelfMap.sample(rng)
        na = schwarzian_norm_estimate(Compose(koebe(), phi.as_expr())).lower_bound
        nh = harmonic_norm_estimate(shear.compose(phi.as_expr())).lower_bound
        dev_inv = max(dev_inv, abs(na - 6.0), abs(nh - 16.0))
    passed = dev_koebe <= 1e-6 and dev_shear <= 1e-3 and dev_inv <= 1e-3
    return CheckResult(
        name="norm_estimates",
        passed=passed,
        measured=max(dev_koebe, dev_shear, dev_inv),
        bound=0.0,
        tolerance=1e-3,
        detail=f"koebe {dev_koebe:.2e}; shear {dev_shear:.2e}; invariance {dev_inv:.2e}",
    )


def check_bounded_census(rng) -> CheckResult:
    """tan_scaled(200) census against the separation/packing bounds and the
    contour count; the packing bound is exactly 4 at C = pi^2/2."""
    rep = tan_zero_census(200.0)
    gap_dev = abs(rep.min_separation - 0.1 * math.pi)
    pack = packing_check(rep, 200.0)
    contour = count_valence(tan_scaled(200.0), 0.0, 0.999)
    exact4 = abs(valence_bound_const(math.pi**2 / 2.0) - 4.0)
    passed = (
        rep.count == 7
        and gap_dev <= 1e-12
        and pack.passed
        and contour.count == 7
        and contour.winding_residual < 0.01
        and exact4 == 0.0
    )
    return CheckResult(
        name="bounded_schwarzian_census",
        passed=passed,
        measured=max(gap_dev, exact4, contour.winding_residual),
        bound=valence_bound_const(200.0),
        tolerance=1e-12,
        detail=(
            f"census {rep.count}, contour {contour.count} "
            f"(winding {contour.winding}, poles {contour.n_poles})"
        ),
    )


def check_growth_pipeline(rng) -> CheckResult:
    """Radius-recurrence breakdown across the sweep: step identity,
    quadrature envelope, log-integral cap, and a single empirical band."""
    worst_step = 0.0
    worst_envelope = 0.0
    worst_i1 = -math.inf
    ratios = []
    for c in SWEEP_CS:
        b = valence_breakdown(c)
        for a, d in zip(b.radii[:-1], b.gaps):
            worst_step = max(worst_step, abs(phi_step(a, b.epsilon) * d - 1.0))
        if b.inner_sum:
            worst_envelope = max(worst_envelope, b.inner_sum / (b.envelope - 1.0))
        i1, _, _ = integral_estimates(c)
        worst_i1 = max(worst_i1, i1 - (2.0 * c / math.pi**2) * math.log(16.0 * c))
        ratios.append(b.ratio)
    band_ok = 4.0 <= min(ratios) and max(ratios) <= 25.0
    passed = worst_step < 1e-10 and worst_envelope <= 1.01 and worst_i1 <= 1e-6 and band_ok
    return CheckResult(
        name="growth_pipeline",
        passed=passed,
        measured=worst_step,
        bound=1e-10,
        tolerance=1e-10,
        detail=(
            f"envelope ratio {worst_envelope:.4f}; "
            f"band [{min(ratios):.2f}, {max(ratios):.2f}]"
        ),
    )


def check_sturm_segments(rng) -> CheckResult:
    """Modulus convexity on random segments, sinusoid zero spacing, and
    the disconjugacy harness on the three catalog profiles."""
    psis = [parse("-3/(1-z^2)^2"), Const(2.5 + 0j), Const(100.0 + 0j)]
    worst_resid = math.inf
    for k in range(20):
        psi = psis[k % len(psis)]
        a, b = complex(_disk_points(rng, 1, 0.75)[0]), complex(_disk_points(rng, 1, 0.75)[0])
        if abs(a - b) < 0.3:
            b = -a if abs(2 * a) > 0.3 else a + 0.5
        u0 = complex(np.exp(2j * np.pi * rng.uniform()))
        du0 = complex(rng.normal() + 1j * rng.normal())
        sol = integrate_segment(psi, SegmentPath(a, b), u0, du0, steps=2000)
        worst_resid = min(worst_resid, modulus_convexity_residual(sol))

    C = 200.0
    sol = integrate_segment(Const(C / 2.0), SegmentPath(-0.9, 0.9), 0.0, 1.0, steps=3000)
    record = find_zeros(sol)
    gap_dev = abs(record.min_gap - math.pi * math.sqrt(2.0 / C))

    worst_zeros = 0
    for profile in (NEHARI_QUADRATIC, NEHARI_CONSTANT, POKORNYI):
        rep = disconjugacy_check(profile, trials=100, seed=int(rng.integers(2**32)))
        worst_zeros = max(worst_zeros, rep.max_zero_count)

    passed = worst_resid >= -1e-6 and gap_dev <= 1e-9 and worst_zeros <= 1
    return CheckResult(
        name="sturm_segments",
        passed=passed,
        measured=worst_resid,
        bound=-1e-6,
        tolerance=1e-6,
        detail=f"gap dev {gap_dev:.2e}; max zeros/solution {worst_zeros}",
    )


def check_legendre_counts(rng) -> CheckResult:
    """(1-x^2) P_n' has exactly n-1 interior zeros; the direct integration
    sees at least that many sign changes."""
    worst = 0
    for n in range(2, 13):
        rec = legendre_lower_bound(n, crosscheck=(n <= 8))
        worst = max(worst, abs(rec.count - (n - 1)))
    return CheckResult(
        name="legendre_zero_counts",
        passed=worst == 0,
        measured=float(worst),
        bound=0.0,
        tolerance=0.0,
        detail="n = 2..12 exact; integration cross-check n = 2..8",
    )


def check_disk_geometry(rng) -> CheckResult:
    """Metric invariance, pseudodisk boundary consistency, and the
    tangent-geodesic crossing parameters."""
    dev_rho = 0.0
    for _ in range(200):
        a, b = (complex(p) for p in _disk_points(rng, 2, 0.9))
        phi = MobiusSelfMap.sample(rng)
        dev_rho = max(dev_rho, abs(rho(phi(a), phi(b)) - rho(a, b)))

    dev_disk = 0.0
    for _ in range(25):
        alpha = complex(_disk_points(rng, 1, 0.85)[0])
        r = float(rng.uniform(0.1, 0.9))
        disk = pseudo_disk(alpha, r)
        for p in disk.boundary_points(64):
            dev_disk = max(dev_disk, abs(rho(complex(p), alpha) - r))
            dev_disk = max(
                dev_disk, abs(abs(p - disk.euclidean_center) - disk.euclidean_radius)
            )

    dev_y = 0.0
    floor_ok = True
    for c in np.geomspace(10.0, 1e4, 40):
        spec = geodesic_rectangle(float(c))
        dev_y = max(dev_y, abs(spec.y**2 - 2.0 * c / (6.0 * c - 1.0)))
        floor_ok = floor_ok and spec.half_angle >= 1.0 / (5.0 * c)

    passed = dev_rho <= 1e-12 and dev_disk <= 1e-10 and dev_y <= 1e-12 and floor_ok
    return CheckResult(
        name="disk_geometry",
        passed=passed,
        measured=max(dev_rho, dev_disk, dev_y),
        bound=0.0,
        tolerance=1e-10,
        detail=f"rho {dev_rho:.2e}; disk {dev_disk:.2e}; y^2 {dev_y:.2e}",
    )


def _sigma_value(hmap: HarmonicMap, z):
    hp = eval_jet(hmap.h, z, order=1).coeffs[1]
    qv = eval_jet(hmap.q, z, order=0).value
    return np.log(np.abs(hp) * (1.0 + np.abs(qv) ** 2))


def _laplacian_sigma(hmap: HarmonicMap, z: complex, h: float = 1e-3) -> float:
    def nine_point(step):
        e = _sigma_value
        s = 4.0 * (
            e(hmap, z + step) + e(hmap, z - step) + e(hmap, z + 1j * step) + e(hmap, z - 1j * step)
        )
        c = (
            e(hmap, z + step + 1j * step)
            + e(hmap, z + step - 1j * step)
            + e(hmap, z - step + 1j * step)
            + e(hmap, z - step - 1j * step)
        )
        return float((s + c - 20.0 * e(hmap, z)) / (6.0 * step * step))

    # one Richardson pass over the 9-point stencil
    return (4.0 * nine_point(h) - nine_point(2.0 * h)) / 3.0


def check_harmonic_layer(rng) -> CheckResult:
    """Analytic reduction, both composition laws, the norm cap arithmetic,
    lift conformality, the curvature identity, and the criterion value."""
    zero = Const(0j)
    dev_reduce = 0.0
    for h in (koebe(), tan_scaled(5.0), parse("exp(2*z)")):
        hmap = HarmonicMap(h, zero)
        for p in _disk_points(rng, 67, 0.8):
            dev_reduce = max(
                dev_reduce, abs(harmonic_schwarzian(hmap, complex(p)) - schwarzian(h, complex(p)))
            )

    shear = shear_koebe(0.0)
    dev_comp = 0.0
    small = parse("z^2/2+z")
    for p in _disk_points(rng, 10, 0.25):
        dev_comp = max(dev_comp, harmonic_composition_residual(shear, small, complex(p)))
    for _ in range(10):
        phi = MobiusSelfMap.sample(rng)
        p = complex(_disk_points(rng, 1, 0.6)[0])
        dev_comp = max(dev_comp, harmonic_composition_residual(shear, phi.as_expr(), p))

    pommerenke_margin = 19407.0 - pommerenke_bound(19204.0)

    dev_lift = 0.0
    for p in _disk_points(rng, 20, 0.5):
        sample = lift(shear, complex(p), check=True)
        dev_lift = max(dev_lift, sample.conformality_residual)

    dev_curv = 0.0
    maps = [
        shear,
        HarmonicMap(koebe(), parse("0.5*z")),
        HarmonicMap(parse("exp(z)"), parse("0.2+0.4*z")),
    ]
    for hmap in maps:
        for p in _disk_points(rng, 8, 0.5):
            density = curvature_density(hmap, complex(p))
            dev_curv = max(dev_curv, abs(density - abs(_laplacian_sigma(hmap, complex(p)))))

    dev_crit = abs(lift_criterion_value(shear, 0.0) - 8.0)

    passed = (
        dev_reduce <= 1e-10
        and dev_comp <= 1e-8
        and pommerenke_margin > 0.0
        and dev_lift <= 1e-6
        and dev_curv <= 1e-5
        and dev_crit <= 1e-9
    )
    return CheckResult(
        name="harmonic_layer",
        passed=passed,
        measured=max(dev_reduce, dev_comp, dev_lift, dev_curv, dev_crit),
        bound=0.0,
        tolerance=1e-5,
        detail=(
            f"reduction {dev_reduce:.2e}; composition {dev_comp:.2e}; "
            f"lift {dev_lift:.2e}; curvature {dev_curv:.2e}; criterion {dev_crit:.2e}"
        ),
    )


def check_qualitative_note(rng) -> CheckResult:
    """The univalence conclusions themselves are not desk-reproducible;
    the separation, packing, breakdown, and disconjugacy harnesses above
    stand in as falsification checks."""
    return CheckResult(
        name="qualitative_coverage_note",
        passed=True,
        measured=0.0,
        bound=0.0,
        tolerance=0.0,
        detail="covered by the property harnesses; nothing further to run",
    )


ALL_CHECKS = (
    check_schwarzian_closed_forms,
    check_norm_estimates,
    check_bounded_census,
    check_growth_pipeline,
    check_sturm_segments,
    check_legendre_counts,
    check_disk_geometry,
    check_harmonic_layer,
    check_qualitative_note,
)


def run_all(seed: int = DEFAULT_SEED) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    return [check(rng) for check in ALL_CHECKS]


def format_table(results) -> str:
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(
            f"[{status}] {r.name}: measured={r.measured:.3e} "
            f"tol={r.tolerance:.1e} ({r.detail})"
        )
    n_pass = sum(r.passed for r in results)
    lines.append(f"{n_pass}/{len(results)} checks passed")
    return "\n".join(lines)
