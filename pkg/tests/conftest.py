"""Shared fields and helpers for the test suite."""

import numpy as np
import pytest

import pseudomode as pm


@pytest.fixture(scope="session")
def airy():
    """a=1, b=0, c=iu: the standard rotated-Airy reference field."""
    return pm.complex_airy()


@pytest.fixture(scope="session")
def davies():
    """a=1, b=0, c=iu^2: admissible region splits into two quadrants."""
    return pm.davies_rotated()


@pytest.fixture(scope="session")
def adv():
    """a=1, b=-i, c=0 on [0,2]: exit endpoint at 0."""
    return pm.advection_exit()


@pytest.fixture(scope="session")
def quad_exact():
    """c = iu + u^2/4: at (0,-1) the eikonal phase is exactly quadratic."""
    return pm.polynomial_field([1.0], [0.0], [0.0, 1j, 0.25], (-4.0, 4.0))


def wnorm(x, v):
    """Trapezoid L2 norm of samples v on abscissae x."""
    w = np.empty_like(np.asarray(x, dtype=float))
    w[1:-1] = (x[2:] - x[:-2]) / 2.0
    w[0] = (x[1] - x[0]) / 2.0
    w[-1] = (x[-1] - x[-2]) / 2.0
    return float(np.sqrt(np.sum(w * np.abs(v) ** 2)))
