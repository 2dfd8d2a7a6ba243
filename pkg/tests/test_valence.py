"""Separation/packing bounds, preimage counting, and the growth pipeline."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

import schwarzian as sc
from schwarzian.errors import DomainError, ValenceCountError
from schwarzian.expr import parse

RNG = np.random.default_rng(0xC0FFEE)


def test_separation_bound():
    assert abs(sc.separation_bound(np.pi**2 / 2) - 2.0) < 1e-14
    assert abs(sc.separation_bound(2 * np.pi**2) - 1.0) < 1e-14
    assert abs(sc.separation_bound(200.0) - 0.3141592653589793) < 1e-15
    with pytest.raises(DomainError):
        sc.separation_bound(0.0)


def test_valence_bound_const():
    assert sc.valence_bound_const(np.pi**2 / 2) == 4.0
    assert abs(sc.valence_bound_const(2 * np.pi**2) - 9.0) < 1e-12
    assert abs(sc.valence_bound_const(50 * np.pi**2) - 121.0) < 1e-10
    assert sc.valence_bound_cap(np.pi**2 / 2) == 4
    # decimal truncation of the threshold still resolves to the sharp case
    assert sc.valence_bound_const(4.9348022) == 4.0
    with pytest.raises(DomainError):
        sc.valence_bound_const(2.0)


def test_annulus_packing_bound():
    assert sc.annulus_packing_bound(0.5) == 12
    assert sc.annulus_packing_bound(1.0) == 6
    with pytest.raises(DomainError):
        sc.annulus_packing_bound(np.pi)


def test_tan_zero_census():
    rep = sc.tan_zero_census(200.0)
    assert rep.count == 7
    assert abs(rep.min_separation - 0.1 * np.pi) < 1e-15

    rep = sc.tan_zero_census(2 * np.pi**2)
    assert rep.count == 1  # spacing exactly 1, boundary zeros excluded

    rep = sc.tan_zero_census(np.pi**2 / 2 * 1.01)
    assert rep.count == 1


def test_census_envelope_sandwich():
    for C in (50.0, 200.0, 800.0):
        rep = sc.tan_zero_census(C)
        assert math.sqrt(2 * C) / np.pi - 1.0 <= rep.count <= sc.valence_bound_const(C)


def test_packing_check():
    assert sc.packing_check(sc.tan_zero_census(200.0), 200.0).passed
    single = sc.ValenceReport(w=0, radius=1.0, count=1, preimages=[0], min_separation=None)
    chk = sc.packing_check(single, 200.0)
    assert chk.passed and chk.vacuous
    fake = sc.ValenceReport(
        w=0, radius=1.0, count=99, preimages=[], min_separation=0.5
    )
    assert not sc.packing_check(fake, 200.0).passed


def test_count_valence_basic():
    rep = sc.count_valence(sc.koebe(), 1.0, 0.9)
    assert rep.count == 1 and rep.winding == 1 and rep.n_poles == 0

    rep = sc.count_valence(parse("identity"), 2.0, 0.9)
    assert rep.count == 0

    rep = sc.count_valence(sc.tan_scaled(200.0), 0.0, 0.999)
    assert rep.count == 7
    assert rep.n_poles == 6
    assert rep.winding == 1
    assert rep.winding_residual < 0.01
    census = sc.tan_zero_census(200.0)
    got = sorted(p.real for p in rep.preimages)
    want = sorted(p.real for p in census.preimages)
    assert np.allclose(got, want, atol=1e-8)


def test_count_valence_polynomial_corpus():
    corpus = [
        ("z^2-0.25", 0.0, 2),
        ("(z-0.1)*(z+0.3)*(z-0.5i)", 0.0, 3),
        ("z^3", 0.1j, 3),
        ("(z-0.2)^2*(z+0.4)", 0.0, 3),
        ("z^4-0.5", 0.0, 4),
        ("(z-0.8)*(z+0.8)", 0.0, 2),
        ("z*(z-0.5)*(z+0.5)*(z-0.5i)*(z+0.5i)", 0.0, 5),
        ("z-5", 0.0, 0),
        ("exp(z)", 1.0, 1),
        ("z^2+z", 0.0, 1),  # the second root sits outside |z| < 0.93
    ]
    for text, w, expected in corpus:
        rep = sc.count_valence(parse(text), w, 0.93)
        assert rep.winding_residual < 0.01
        assert rep.winding == expected
        if text != "(z-0.2)^2*(z+0.4)":
            assert rep.count == expected
        else:
            # double root: one location, multiplicity carried by the winding
            assert rep.count == 2 and rep.winding == 3


def test_count_valence_near_contour_root():
    with pytest.raises(ValenceCountError):
        sc.count_valence(parse("z-0.9"), 0.0, 0.9)


def test_next_radius():
    x, d = sc.next_radius(0.0, 0.5)
    assert abs(x - 1 / np.sqrt(5.0)) < 1e-15
    x, d = sc.next_radius(0.3, 1e-9)
    assert abs(x - 0.3) < 1e-8
    x, d = sc.next_radius(0.8, 0.1)
    assert abs((x - 0.8) - 0.1 * np.sqrt(1 - x * x)) < 1e-12
    with pytest.raises(DomainError):
        sc.next_radius(1.0, 0.1)


def test_phi_step():
    assert abs(sc.phi_step(0.0, 1.0) - np.sqrt(2.0)) < 1e-15
    assert abs(sc.phi_step(0.0, 0.5) - np.sqrt(1.25) / 0.5) < 1e-14
    x, d = sc.next_radius(0.0, 0.5)
    assert abs(sc.phi_step(0.0, 0.5) * d - 1.0) < 1e-14
    assert sc.phi_step(0.2, 0.1) < sc.phi_step(0.5, 0.1) < sc.phi_step(0.8, 0.1)


def test_breakdown_small_case():
    b = sc.valence_breakdown(4.0)
    assert abs(b.r0 - np.pi / np.sqrt(np.pi**2 + 16.0)) < 1e-15
    assert abs(b.R**2 - (1 - 1 / 16.0)) < 1e-15
    assert abs(b.R1**2 - (1 - 1 / 8.0)) < 1e-15
    assert b.radii == sorted(b.radii)
    assert all(r < 1 for r in b.radii)
    assert b.radii[-1] <= b.R
    assert b.total == 1 + b.inner_sum + b.gap_annulus_count + b.rectangle_count
    for a, d, n in zip(b.radii[:-1], b.gaps, b.per_annulus_counts):
        assert n == math.floor(2 * np.pi / d)
        assert abs(sc.phi_step(a, b.epsilon) * d - 1.0) < 1e-10
    with pytest.raises(DomainError):
        sc.valence_breakdown(2.0)
    with pytest.raises(DomainError):
        sc.valence_breakdown(2e6)


def test_sweep_threaded_matches_serial():
    serial = sc.breakdown_sweep([4.0, 64.0, 16.0])
    threaded = sc.breakdown_sweep([64.0, 4.0, 16.0], max_workers=3)
    assert [b.C for b in serial] == [b.C for b in threaded] == [4.0, 16.0, 64.0]
    assert [b.total for b in serial] == [b.total for b in threaded]


def test_breakdown_sweep_band_and_monotone():
    bds = sc.breakdown_sweep([4.0, 16.0, 64.0, 256.0, 1024.0])
    totals = [b.total for b in bds]
    assert totals == sorted(totals)
    ratios = [b.ratio for b in bds]
    assert all(np.isfinite(r) and r > 0 for r in ratios)
    assert max(ratios) < 25.0 and min(ratios) > 4.0
    rows = sc.sweep_rows(bds)
    assert [row["C"] for row in rows] == [4.0, 16.0, 64.0, 256.0, 1024.0]


def test_integral_estimates():
    for C in (4.0, 64.0, 1024.0):
        i1, i2, i3 = sc.integral_estimates(C)
        eps = np.pi / (2 * np.sqrt(C))
        R = np.sqrt(1 - 1 / (4 * C))
        # closed forms: I1 = atanh(R)/eps^2, I2 = R/(1-R^2)
        assert abs(i1 - np.arctanh(R) / eps**2) < 1e-6 * i1
        assert abs(i2 - R / (1 - R * R)) < 1e-6 * i2
        assert i1 <= (2 * C / np.pi**2) * np.log(16 * C) + 1e-6
        # the three pieces recombine into the full phi^2 integral
        total, _ = quad(lambda x: sc.phi_step(x, eps) ** 2, 0.0, R, limit=200)
        assert abs((i1 + i2 + i3) - total) < 1e-6 * total


def test_breakdown_riemann_comparison():
    # left Riemann sums of the increasing phi^2 stay under the integral
    for C in (16.0, 256.0):
        b = sc.valence_breakdown(C)
        i1, i2, i3 = sc.integral_estimates(C)
        partial = sum(
            sc.phi_step(a, b.epsilon) ** 2 * d for a, d in zip(b.radii[:-1], b.gaps)
        )
        assert partial <= (i1 + i2 + i3) * (1.0 + 1e-9)
        assert b.inner_sum <= 1.01 * (b.envelope - 1.0)


def test_bound_config():
    cfg = sc.BoundConfig(100.0, "constant")
    assert abs(cfg.epsilon - np.pi / 20.0) < 1e-15
    with pytest.raises(DomainError):
        sc.BoundConfig(3.0, "constant")
    with pytest.raises(DomainError):
        sc.BoundConfig(1.5, "growth")
    with pytest.raises(DomainError):
        sc.BoundConfig(10.0, "other")


def test_sweep_csv(tmp_path):
    bds = sc.breakdown_sweep([4.0, 16.0])
    path = tmp_path / "sweep.csv"
    sc.sweep_to_csv(bds, path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "C,r0,m,R,R1,inner_sum,gap_count,rect_count,total,total_over_ClogC"
    assert len(lines) == 3
