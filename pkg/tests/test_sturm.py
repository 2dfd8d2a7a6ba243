"""Segment integration, zero isolation, and oscillation counts."""

import numpy as np
import pytest

import schwarzian as sc
from schwarzian.errors import DomainError, IntegrationError
from schwarzian.expr import Const, parse

RNG = np.random.default_rng(0xC0FFEE)


def test_segment_path_validation():
    with pytest.raises(DomainError):
        sc.SegmentPath(0.0, 1.0)
    with pytest.raises(DomainError):
        sc.SegmentPath(0.2, 0.2)
    path = sc.SegmentPath(-0.5, 0.5j)
    assert abs(path.length - abs(0.5j + 0.5)) < 1e-15
    assert abs(abs(path.direction) - 1.0) < 1e-15


def test_zero_potential_is_linear():
    sol = sc.integrate_segment(Const(0j), sc.SegmentPath(-0.5, 0.5), 0.0, 1.0, steps=200)
    assert np.max(np.abs(sol.u - sol.s)) < 1e-12


def test_constant_potential_sinusoid():
    C = 200.0
    w = np.sqrt(C / 2.0)
    sol = sc.integrate_segment(Const(C / 2), sc.SegmentPath(-0.9, 0.9), 0.0, 1.0, steps=3000)
    assert np.max(np.abs(sol.u - np.sin(w * sol.s) / w)) < 1e-10
    record = sc.find_zeros(sol)
    assert record.count == 6
    assert abs(record.min_gap - np.pi * np.sqrt(2.0 / C)) < 1e-9


def test_tan_catalog_cosine_recovered():
    # psi = (S f)/2 = C/2 for the scaled tangent; u = cos(sqrt(C/2) z)
    C = 40.0
    w = np.sqrt(C / 2.0)
    alpha, beta = -0.7, 0.8
    sol = sc.integrate_segment(
        Const(C / 2),
        sc.SegmentPath(alpha, beta),
        np.cos(w * alpha),
        -w * np.sin(w * alpha),
        steps=2000,
    )
    z = sol.path.point(sol.s)
    assert np.max(np.abs(sol.u - np.cos(w * z))) < 1e-10


def test_step_count_too_small():
    with pytest.raises(IntegrationError):
        sc.integrate_segment(Const(2500.0), sc.SegmentPath(-0.9, 0.9), 0.0, 1.0, steps=100)
    with pytest.raises(DomainError):
        sc.integrate_segment(Const(0j), sc.SegmentPath(-0.5, 0.5), 0.0, 1.0, steps=50)


def test_integrator_fourth_order():
    # refinement residual should drop ~16x when the step halves
    path = sc.SegmentPath(-0.8, 0.8)
    r1 = sc.integrate_segment(Const(1.0), path, 0.0, 1.0, steps=100).residual
    r2 = sc.integrate_segment(Const(1.0), path, 0.0, 1.0, steps=200).residual
    assert 8.0 < r1 / r2 < 32.0


def test_zero_separation_check():
    C = 200.0
    sol = sc.integrate_segment(Const(C / 2), sc.SegmentPath(-0.9, 0.9), 0.0, 1.0, steps=3000)
    record = sc.find_zeros(sol)
    chk = sc.zero_separation_check(C, record)
    assert chk.passed and not chk.vacuous

    # at C = pi^2/2 the spacing is 2, so a segment inside the disk holds
    # at most one zero of this solution family
    C = np.pi**2 / 2
    sol = sc.integrate_segment(
        Const(C / 2), sc.SegmentPath(-0.999999, 0.999999), 0.0, 1.0, steps=2000
    )
    record = sc.find_zeros(sol)
    assert record.count == 1
    chk = sc.zero_separation_check(C, record)
    assert chk.passed and chk.vacuous


def test_modulus_convexity_examples():
    path = sc.SegmentPath(-0.5, 0.5)
    sol = sc.integrate_segment(Const(0j), path, 1.0, 1.0, steps=500)  # u = 1 + s
    assert abs(sc.modulus_convexity_residual(sol)) < 1e-10

    psi = parse("-3/(1-z^2)^2")  # (S koebe)/2
    sol = sc.integrate_segment(psi, sc.SegmentPath(0.0, 0.7), 1.0, 0.3 + 0.2j, steps=2000)
    assert sc.modulus_convexity_residual(sol) >= -1e-6

    C = 60.0
    sol = sc.integrate_segment(Const(C / 2), sc.SegmentPath(-0.9, 0.9), 0.0, 1.0, steps=3000)
    res = sc.modulus_convexity_residual(sol)
    assert -1e-6 <= res < 1e-6  # |sin| is the equality case


def test_modulus_convexity_explicit_psi_argument():
    psi = Const(2.0 + 0j)
    sol = sc.integrate_segment(psi, sc.SegmentPath(-0.6, 0.6), 1.0, 0.5j, steps=1000)
    a = sc.modulus_convexity_residual(sol)
    b = sc.modulus_convexity_residual(sol, psi)
    assert abs(a - b) < 1e-14


def test_sturm_monotonicity_in_constant():
    counts = []
    for c in (1.0, 4.0, 9.0, 16.0):
        sol = sc.integrate_segment(
            Const(c), sc.SegmentPath(-0.95, 0.95), 0.0, 1.0, steps=2000
        )
        counts.append(sc.find_zeros(sol).count)
    assert counts == sorted(counts)


def test_legendre_lower_bound():
    rec = sc.legendre_lower_bound(3)
    assert rec.count == 2
    assert np.allclose(sorted(rec.locations), [-1 / np.sqrt(5), 1 / np.sqrt(5)], atol=1e-12)

    rec = sc.legendre_lower_bound(2)
    assert rec.count == 1 and abs(rec.locations[0]) < 1e-12

    rec = sc.legendre_lower_bound(1)
    assert rec.count == 0

    for n in range(2, 13):
        assert sc.legendre_lower_bound(n, crosscheck=False).count == n - 1

    with pytest.raises(DomainError):
        sc.legendre_lower_bound(31)


def test_disconjugacy_profiles():
    for profile in (sc.NEHARI_QUADRATIC, sc.NEHARI_CONSTANT, sc.POKORNYI):
        rep = sc.disconjugacy_check(profile, trials=20, seed=7)
        assert rep.max_zero_count <= 1
        assert rep.passed


def test_disconjugacy_rejects_trivial_data():
    with pytest.raises(DomainError):
        sc.profile_solution_zero_count(sc.NEHARI_CONSTANT, 0.0, 0.0, 0.0)


def test_disconjugacy_constant_profile_exact():
    # u = cos(pi x / 2) solves u'' + (pi^2/4) u = 0 with one interior zero
    count, _ = sc.profile_solution_zero_count(sc.NEHARI_CONSTANT, 0.0, 1.0, 0.0)
    assert count == 0  # cos has zeros exactly at +-1, outside the open range
    count, _ = sc.profile_solution_zero_count(sc.NEHARI_CONSTANT, 0.0, 0.0, 1.0)
    assert count == 1  # sin(pi x / 2) vanishes at 0 only
