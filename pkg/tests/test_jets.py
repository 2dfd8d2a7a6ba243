"""Jet arithmetic against finite differences and closed forms."""

import numpy as np
import pytest

import schwarzian as sc
from schwarzian.errors import BranchCutError, PoleError
from schwarzian.expr import Compose, parse
from schwarzian.jets import jet_compose

RNG = np.random.default_rng(0xC0FFEE)

# (outer, inner, sample radius) pairs safe to compose on the sample disk
CHAIN_CASES = [
    ("exp(z)", "z^2/2+0.3*z", 0.6),
    ("sin(z)", "exp(z)-1", 0.5),
    ("z/(1-z)^2", "0.5*z", 0.7),
    ("log(1+z)", "0.4*z+0.2*z^2", 0.6),
    ("tan(z)", "0.3*z", 0.8),
    ("sqrt(1+z)", "0.5*z^2", 0.7),
]


def fd_coeffs(f, z):
    """Taylor coefficients c_0..c_3 from central differences.

    Step sizes grow with the order: double-precision third differences at
    1e-5 would be pure roundoff, so each order uses the step that balances
    truncation against cancellation noise.
    """
    val = lambda w: sc.eval_value(f, w)
    h1, h2, h3 = 1e-5, 1e-4, 1e-3
    c0 = val(z)
    c1 = (val(z + h1) - val(z - h1)) / (2 * h1)
    c2 = (val(z + h2) - 2 * c0 + val(z - h2)) / (2 * h2**2)
    c3 = (
        val(z + 2 * h3) - 2 * val(z + h3) + 2 * val(z - h3) - val(z - 2 * h3)
    ) / (12 * h3**3)
    return np.array([c0, c1, c2, c3])


@pytest.mark.parametrize("outer,inner,radius", CHAIN_CASES)
def test_chain_rule_two_routes_agree(outer, inner, radius):
    f, g = parse(outer), parse(inner)
    for _ in range(8):
        z = radius * np.sqrt(RNG.uniform()) * np.exp(2j * np.pi * RNG.uniform())
        direct = sc.eval_jet(Compose(f, g), z, order=3)
        inner_jet = sc.eval_jet(g, z, order=3)
        outer_jet = sc.eval_jet(f, complex(inner_jet.value), order=3)
        composed = jet_compose(outer_jet, inner_jet)
        denom = np.maximum(np.abs(direct.coeffs), 1.0)
        assert np.max(np.abs(direct.coeffs - composed.coeffs) / denom) < 1e-12


@pytest.mark.parametrize("outer,inner,radius", CHAIN_CASES[:4])
def test_chain_rule_matches_finite_differences(outer, inner, radius):
    tols = np.array([1e-12, 1e-6, 1e-6, 1e-4])
    tree = Compose(parse(outer), parse(inner))
    for _ in range(4):
        z = 0.8 * radius * np.sqrt(RNG.uniform()) * np.exp(2j * np.pi * RNG.uniform())
        jet = sc.eval_jet(tree, z, order=3)
        approx = fd_coeffs(tree, z)
        assert np.all(np.abs(jet.coeffs - approx) < tols)


def test_elementary_jets():
    z = 0.3 + 0.2j
    jet = sc.eval_jet(parse("exp(z)"), z, order=3)
    e = np.exp(z)
    assert np.allclose(jet.coeffs, [e, e, e / 2, e / 6], rtol=1e-14)

    jet = sc.eval_jet(parse("log(z)"), z, order=2)
    assert abs(jet.coeffs[1] - 1 / z) < 1e-14
    assert abs(jet.coeffs[2] - (-1 / z**2) / 2) < 1e-14

    jet = sc.eval_jet(parse("sqrt(z)"), z, order=2)
    s = np.sqrt(z)
    assert abs(jet.coeffs[1] - 0.5 / s) < 1e-14

    jet = sc.eval_jet(parse("tan(z)"), z, order=1)
    assert abs(jet.coeffs[1] - (1 + np.tan(z) ** 2)) < 1e-13


def test_derivative_accessor():
    jet = sc.eval_jet(sc.koebe(), 0.2, order=3)
    assert abs(jet.derivative(2) - 2 * jet.coeffs[2]) == 0


def test_pole_raises_and_masks():
    f = parse("1/z")
    with pytest.raises(PoleError):
        sc.eval_jet(f, 0.0, order=1)
    jet = sc.eval_jet(f, np.array([0.0, 0.5]), order=1, masked=True)
    assert list(jet.valid) == [False, True]


def test_branch_cut_flagged():
    with pytest.raises(BranchCutError):
        sc.eval_jet(parse("log(z)"), -0.5, order=1)
    with pytest.raises(BranchCutError):
        sc.eval_jet(parse("sqrt(z-1)"), 0.5, order=1)
    jet = sc.eval_jet(parse("log(z)"), np.array([-0.5, 0.5]), order=1, masked=True)
    assert list(jet.valid) == [False, True]
