"""Harmonic Schwarzian, shears, lifts, and the univalence criterion."""

import numpy as np
import pytest

import schwarzian as sc
from schwarzian.errors import DomainError
from schwarzian.expr import Const, eval_jet, parse

RNG = np.random.default_rng(0xC0FFEE)
ZERO_Q = Const(0j)


def disk_points(n, r=0.8):
    return r * np.sqrt(RNG.uniform(size=n)) * np.exp(2j * np.pi * RNG.uniform(size=n))


def wirtinger_dz(fn, z, h=1e-3):
    """(d/dx - i d/dy)/2 with five-point one-dimensional stencils."""

    def partial(direction):
        pts = [fn(z + k * h * direction) for k in (-2, -1, 1, 2)]
        return (pts[0] - 8 * pts[1] + 8 * pts[2] - pts[3]) / (12 * h)

    return 0.5 * (partial(1.0) - 1j * partial(1.0j))


def test_analytic_reduction():
    hmap = sc.HarmonicMap(sc.koebe(), ZERO_Q)
    assert abs(sc.harmonic_schwarzian(hmap, 0.0) + 6.0) < 1e-12
    for h in (sc.koebe(), sc.tan_scaled(5.0), parse("exp(2*z)")):
        hmap = sc.HarmonicMap(h, ZERO_Q)
        for z in disk_points(20):
            z = complex(z)
            assert abs(sc.harmonic_schwarzian(hmap, z) - sc.schwarzian(h, z)) < 1e-10


def test_shear_closed_form():
    shear = sc.shear_koebe(0.0)
    assert abs(sc.harmonic_schwarzian(shear, 0.0) + 4.0) < 1e-12
    for z in disk_points(100, 0.9):
        z = complex(z)
        want = -4.0 * (1.0 / (1.0 - z) + np.conj(z) / (1.0 + abs(z) ** 2)) ** 2
        assert abs(sc.harmonic_schwarzian(shear, z) - want) < 1e-8


def test_shear_dilatation_and_identity():
    for theta in (0.0, 1.3, 4.0):
        shear = sc.shear_koebe(theta)
        eta = np.exp(0.5j * theta)
        for z in disk_points(10, 0.7):
            z = complex(z)
            assert abs(shear.omega(z) - np.exp(1j * theta) * z * z) < 1e-14
            # h - g is the rotated Koebe function (g by quadrature)
            want = sc.eval_value(sc.koebe(), eta * z)
            got = sc.eval_value(shear.h, z) - shear.g(z)
            assert abs(got - want) < 1e-10


def test_sigma_jet_matches_stencils():
    shear = sc.shear_koebe(0.0)

    def sigma(z):
        hp = eval_jet(shear.h, z, order=1).coeffs[1]
        qv = eval_jet(shear.q, z, order=0).value
        return float(np.log(np.abs(hp) * (1.0 + np.abs(qv) ** 2)))

    for z in disk_points(10, 0.5):
        z = complex(z)
        jet = sc.sigma_jet(shear, z)
        assert abs(jet.sigma - sigma(z)) < 1e-12
        fd_sz = wirtinger_dz(sigma, z)
        assert abs(jet.sigma_z - fd_sz) < 1e-6
        fd_szz = wirtinger_dz(lambda w: wirtinger_dz(sigma, w, h=2e-3), z, h=2e-3)
        assert abs(jet.sigma_zz - fd_szz) < 1e-5


def test_harmonic_schwarzian_matches_stencils():
    hmap = sc.HarmonicMap(sc.koebe(), parse("0.5*z"))

    def sigma(z):
        hp = eval_jet(hmap.h, z, order=1).coeffs[1]
        qv = eval_jet(hmap.q, z, order=0).value
        return float(np.log(np.abs(hp) * (1.0 + np.abs(qv) ** 2)))

    for z in disk_points(5, 0.5):
        z = complex(z)
        sz = wirtinger_dz(sigma, z, h=2e-3)
        szz = wirtinger_dz(lambda w: wirtinger_dz(sigma, w, h=2e-3), z, h=2e-3)
        assert abs(sc.harmonic_schwarzian(hmap, z) - 2.0 * (szz - sz * sz)) < 1e-5


def test_composition_laws():
    shear = sc.shear_koebe(0.0)
    assert sc.harmonic_composition_residual(shear, parse("identity"), 0.3 + 0.1j) < 1e-12

    for _ in range(5):
        phi = sc.MobiusSelfMap.sample(RNG)
        z = complex(disk_points(1, 0.5)[0])
        assert sc.harmonic_composition_residual(shear, phi.as_expr(), z) < 1e-8
        assert abs(sc.schwarzian(phi.as_expr(), z)) < 1e-9  # no extra term for Mobius

    small = parse("z^2/2+z")
    for z in disk_points(5, 0.25):
        assert sc.harmonic_composition_residual(shear, small, complex(z)) < 1e-8


def test_harmonic_norms():
    assert abs(sc.harmonic_norm_estimate(sc.HarmonicMap(sc.koebe(), ZERO_Q)).lower_bound - 6.0) < 1e-6
    assert abs(sc.harmonic_norm_estimate(sc.shear_koebe(0.0)).lower_bound - 16.0) < 1e-3
    assert sc.harmonic_norm_estimate(sc.HarmonicMap(parse("identity"), ZERO_Q)).lower_bound == 0.0


def test_shear_norm_rotation_insensitive():
    for theta in (2.1, 5.0):
        est = sc.harmonic_norm_estimate(sc.shear_koebe(theta))
        assert abs(est.lower_bound - 16.0) < 1e-3


def test_pommerenke_bound():
    assert sc.pommerenke_bound(19204.0) < 19407.0
    assert sc.pommerenke_bound(19204.0) > 19406.9
    assert sc.pommerenke_bound(0.0) == 9.0
    assert abs(sc.pommerenke_bound(6.0) - 17.0) < 1e-12
    with pytest.raises(DomainError):
        sc.pommerenke_bound(-1.0)


def test_convexity_indicator():
    assert abs(sc.convexity_indicator(parse("identity"), 0.3 + 0.2j) - 1.0) < 1e-14
    edge = -(2.0 - np.sqrt(3.0))
    assert abs(sc.convexity_indicator(sc.koebe(), edge)) < 1e-10
    assert sc.convexity_indicator(sc.koebe(), 0.0) == 1.0
    assert sc.convexity_indicator(sc.koebe(), edge + 0.05) > 0
    assert sc.convexity_indicator(sc.koebe(), edge - 0.05) < 0


def test_convexity_floor_and_mu():
    assert sc.convexity_floor(0.0, 5.0) == 1.0
    lam = 49.0
    root = lam - np.sqrt(lam * lam - 1.0)
    assert abs(sc.mu(lam) - root) < 1e-15
    # mu is the smaller root of 1 - 2 lam rho + rho^2
    assert abs(1.0 - 2.0 * lam * root + root * root) < 1e-12
    assert abs(root - 0.010205) < 1e-6
    assert sc.convexity_floor(root * 0.99, lam) > 0
    assert sc.convexity_floor(root * 1.01, lam) < 0
    assert sc.mu(1.0) == 1.0
    with pytest.raises(DomainError):
        sc.convexity_floor(1.2, 2.0)


def test_schwarz_transform_coefficient():
    assert abs(sc.schwarz_transform_coefficient(sc.koebe(), 0.0) - 4.0) < 1e-14
    for zeta in (0.9, 0.99, 0.6j):
        got = sc.schwarz_transform_coefficient(parse("identity"), zeta)
        assert abs(got + 2.0 * np.conj(zeta)) < 1e-14


def test_lift_planar_when_q_vanishes():
    hmap = sc.HarmonicMap(sc.koebe(), ZERO_Q)
    sample = sc.lift(hmap, 0.4 + 0.1j)
    assert abs(sample.coords[2]) == 0.0
    hp = abs(eval_jet(sc.koebe(), 0.4 + 0.1j, order=1).coeffs[1])
    assert abs(sample.conformal_factor - hp) < 1e-12
    assert sample.curvature_density == 0.0


def test_lift_conformality_and_factor():
    shear = sc.shear_koebe(0.0)
    sample = sc.lift(shear, 0.3)
    assert sample.conformality_residual < 1e-6
    # e^sigma = |h'| (1 + |q|^2) equals |h'| + |g'|
    z = 0.3
    hp = eval_jet(shear.h, z, order=1).coeffs[1]
    gp = shear.gprime_value(z)
    assert abs(sample.conformal_factor - (abs(hp) + abs(gp))) < 1e-12


def test_lift_criterion_values():
    # constant dilatation root: the curvature term vanishes
    hmap = sc.HarmonicMap(sc.koebe(), Const(0.3 + 0j))
    z = 0.2 + 0.1j
    assert abs(
        sc.lift_criterion_value(hmap, z) - abs(sc.harmonic_schwarzian(hmap, z))
    ) < 1e-14

    assert abs(sc.lift_criterion_value(sc.shear_koebe(0.0), 0.0) - 8.0) < 1e-12


def test_lift_criterion_report_modes():
    shear = sc.shear_koebe(0.0)
    samples = disk_points(40, 0.5)
    rep = sc.lift_criterion_report(shear, samples, C=1000.0)
    assert rep.mode == "constant" and rep.passed
    rep = sc.lift_criterion_report(shear, samples, C=2.0, growth=True)
    assert rep.mode == "growth"
    rep = sc.lift_criterion_report(shear, samples, profile=sc.POKORNYI)
    assert rep.mode == "profile"
    with pytest.raises(DomainError):
        sc.lift_criterion_report(shear, samples)


def test_harmonic_preimages_identity():
    hmap = sc.HarmonicMap(parse("identity"), ZERO_Q)
    rep = sc.harmonic_preimages(hmap, 0.5)
    assert rep.count == 1
    assert abs(rep.preimages[0] - 0.5) < 1e-10


def test_harmonic_preimages_shear_univalent():
    shear = sc.shear_koebe(0.0)
    for w in (0.2 + 0.1j, -0.15 + 0.3j, 0.05):
        rep = sc.harmonic_preimages(shear, w)
        assert rep.count == 1
        assert abs(shear.f(rep.preimages[0]) - w) < 1e-8


def test_harmonic_preimages_criterion_separation():
    # dilatation root q = z over a bounded-criterion map: with the
    # empirical criterion constant from a sample sweep, any coincident
    # lift points must respect the separation bound
    hmap = sc.HarmonicMap(sc.tan_scaled(5.0), parse("z"))
    samples = sc.GridSpec(16, 32, 0.9).points()
    c_emp = max(sc.lift_criterion_value(hmap, complex(p)) for p in samples)
    rep = sc.harmonic_preimages(hmap, 0.0, C=c_emp)
    assert rep.count == 1  # frozen from a dense grid search over f
    assert rep.min_separation is None or rep.min_separation >= sc.separation_bound(c_emp) - 1e-9


def test_orientation_guard():
    hmap = sc.HarmonicMap(parse("identity"), parse("2*z"))
    with pytest.raises(DomainError):
        sc.harmonic_schwarzian(hmap, 0.6)
