"""Legendre recurrence output against hand values and the defining ODE."""

import numpy as np
import pytest

from schwarzian.errors import DomainError
from schwarzian.legendre import legendre_ode_residual, legendre_poly


def test_low_degrees():
    assert np.allclose(legendre_poly(0).coef, [1.0])
    assert np.allclose(legendre_poly(1).coef, [0.0, 1.0])
    assert np.allclose(legendre_poly(2).coef, [-0.5, 0.0, 1.5])
    assert np.allclose(legendre_poly(3).coef, [0.0, -1.5, 0.0, 2.5])


def test_value_at_one():
    # float Horner at x=1 is well conditioned only for moderate degree;
    # legendre_poly itself asserts P_n(1) = 1 exactly in rational arithmetic
    for n in (0, 1, 5, 17):
        assert abs(legendre_poly(n)(1.0) - 1.0) < 1e-10
    legendre_poly(50)  # the exact internal check still runs at the cap


@pytest.mark.parametrize("n", list(range(0, 31, 3)))
def test_defining_ode(n):
    assert legendre_ode_residual(n) < 1e-10


def test_degree_cap():
    with pytest.raises(DomainError):
        legendre_poly(51)
    with pytest.raises(DomainError):
        legendre_poly(-1)
