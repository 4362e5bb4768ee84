"""Dense discretization, singular values, propagation, resolvent maps."""

import numpy as np
import pytest
import scipy.linalg as sla

import pseudomode as pm
from pseudomode.grid import (BoundaryCondition, DenseOperator, Grid1D,
                             discretize, filling_probe, propagate,
                             resolvent_map, residual_stencil,
                             smallest_singular_value)


def test_grid1d_basics():
    g = Grid1D(-1.0, 1.0, 101)
    assert g.x[0] == -1.0 and g.x[-1] == 1.0
    assert abs(g.dx - 0.02) < 1e-15
    assert abs(np.sum(g.weights) - 2.0) < 1e-12      # trapezoid total mass
    assert g.weights[0] == g.weights[-1] == g.dx / 2.0
    with pytest.raises(ValueError):
        Grid1D(-1.0, 1.0, 4)
    with pytest.raises(ValueError):
        Grid1D(1.0, -1.0, 50)


def test_boundary_condition_validation():
    BoundaryCondition("dirichlet")
    BoundaryCondition("robin", coef_deriv=1.0, coef_value=2.0)
    with pytest.raises(ValueError):
        BoundaryCondition("neumann")
    with pytest.raises(ValueError):
        BoundaryCondition("robin", coef_deriv=1.0)
    with pytest.raises(pm.PreconditionError):
        BoundaryCondition("robin", coef_deriv=0.0, coef_value=0.0)


def test_discretize_guards(airy):
    g = Grid1D(-1.0, 1.0, 64)
    with pytest.raises(pm.PreconditionError):
        discretize(airy, 2.0, g, BoundaryCondition("dirichlet"))
    with pytest.raises(pm.DomainError):
        discretize(airy, 0.1, Grid1D(-9.0, 9.0, 64),
                   BoundaryCondition("dirichlet"))


def test_dirichlet_rows_and_reduction(airy):
    g = Grid1D(-1.0, 1.0, 64)
    op = discretize(airy, 0.1, g, BoundaryCondition("dirichlet"))
    A = op.matrix
    assert A[0, 0] == 1.0 and np.all(A[0, 1:] == 0.0)
    assert A[-1, -1] == 1.0 and np.all(A[-1, :-1] == 0.0)
    R = op.reduced()
    assert R.shape == (62, 62)
    # Dirichlet elimination is plain deletion of the boundary rows/columns
    np.testing.assert_array_equal(R, A[1:-1, 1:-1])


def test_robin_rows(airy):
    g = Grid1D(-1.0, 1.0, 64)
    h, cd, cv = 0.1, 1.0, 2.0
    op = discretize(airy, h, g, BoundaryCondition("robin", cd, cv))
    A, dx = op.matrix, g.dx
    np.testing.assert_allclose(
        A[0, :3],
        [cd * h * -3.0 / (2 * dx) + cv, cd * h * 4.0 / (2 * dx),
         cd * h * -1.0 / (2 * dx)])
    assert op.reduced().shape == (62, 62)


def test_interior_stencil_order(airy):
    # smooth test function vanishing at both Dirichlet endpoints
    h = 0.5

    def worst_row_error(m):
        g = Grid1D(-1.0, 1.0, m)
        op = discretize(airy, h, g, BoundaryCondition("dirichlet"))
        x = g.x
        e = np.exp(1j * x)
        f = np.cos(np.pi * x / 2.0) ** 2 * e
        fpp = (-np.pi ** 2 / 2.0 * np.cos(np.pi * x)
               - 1j * np.pi * np.sin(np.pi * x)
               - np.cos(np.pi * x / 2.0) ** 2) * e
        lf = -h ** 2 * fpp + 1j * x * f
        return np.max(np.abs((op.matrix @ f)[1:-1] - lf[1:-1]))

    errs = [worst_row_error(m) for m in (200, 400, 800)]
    orders = np.log2(np.array(errs[:-1]) / errs[1:])
    assert np.all(orders > 1.8) and np.all(orders < 2.2)


def test_residual_stencil_cross_checks_analytic_path(airy):
    mode = pm.assemble_mode(airy, 0.0, -1.0, 2.0 ** -4, n=1, K=48)
    rl = pm.residual_triple(mode, airy)[2]
    rs = residual_stencil(mode, airy)
    assert abs(rs - rl) <= 1e-3 * rl
    with pytest.raises(pm.PreconditionError):
        residual_stencil(mode, airy, m=32)


def test_order_fit_recovers_exact_monomial():
    hs = np.array([0.1, 0.05, 0.025, 0.0125])
    slope, intercept, r2 = pm.order_fit(hs, 3.0 * hs ** 2.5)
    assert abs(slope - 2.5) < 1e-12
    assert abs(np.exp(intercept) - 3.0) < 1e-12
    assert abs(r2 - 1.0) < 1e-12
    with pytest.raises(pm.PreconditionError):
        pm.order_fit(hs, 0.0 * hs)
    with pytest.raises(pm.PreconditionError):
        pm.order_fit(-hs, 3.0 * hs)


def test_smallest_singular_value_matches_svd():
    rng = np.random.default_rng(5)
    M = rng.standard_normal((40, 40)) + 1j * rng.standard_normal((40, 40))
    w = rng.uniform(0.5, 2.0, 40)
    got, conv = smallest_singular_value(M, w=w)
    sw = np.sqrt(w)
    ref = float(np.min(sla.svdvals(sw[:, None] * M / sw[None, :])))
    assert conv
    assert abs(got - ref) <= 1e-10 * ref
    sing = np.zeros((5, 5))
    assert smallest_singular_value(sing) == (0.0, True)


def test_smin_is_lipschitz_in_z():
    rng = np.random.default_rng(8)
    M = rng.standard_normal((30, 30)) + 1j * rng.standard_normal((30, 30))
    eye = np.eye(30)
    for _ in range(5):
        z1 = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        z2 = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        s1, _ = smallest_singular_value(M - z1 * eye)
        s2, _ = smallest_singular_value(M - z2 * eye)
        assert abs(s1 - s2) <= abs(z1 - z2) * (1.0 + 1e-8) + 1e-12


def test_propagate_methods_agree():
    rng = np.random.default_rng(2)
    A = (rng.standard_normal((24, 24)) + 1j * rng.standard_normal((24, 24))) / 40.0
    f = rng.standard_normal(24) + 1j * rng.standard_normal(24)
    t = 0.7
    ge = propagate(A, f, t, method="expm")
    gc = propagate(A, f, t, method="cn", tol=1e-8)
    assert np.linalg.norm(ge - gc) <= 1e-7 * np.linalg.norm(ge)
    # semigroup property of the dense exponential
    g2 = propagate(A, propagate(A, f, 0.3), 0.4)
    assert np.linalg.norm(g2 - ge) <= 1e-12 * np.linalg.norm(ge)
    g0 = propagate(A, f, 0.0)
    assert np.array_equal(g0, f) and g0 is not f
    with pytest.raises(ValueError):
        propagate(A, f, 1.0, method="rk4")


def test_resolvent_map_shapes(airy):
    g = Grid1D(-1.0, 1.0, 80)
    op = discretize(airy, 2.0 ** -4, g, BoundaryCondition("dirichlet"))
    z_re = np.linspace(0.1, 0.5, 3)
    z_im = np.linspace(-0.3, 0.3, 4)
    smin, ok = resolvent_map(op, z_re, z_im)
    assert smin.shape == (3, 4) and ok.shape == (3, 4)
    assert ok.all() and np.all(smin > 0.0)
    # spot check one cell against the dense decomposition
    M = op.reduced() - (z_re[1] + 1j * z_im[2]) * np.eye(78)
    sw = np.sqrt(op.w_interior)
    ref = float(np.min(sla.svdvals(sw[:, None] * M / sw[None, :])))
    assert abs(smin[1, 2] - ref) <= 1e-8 * ref


def test_filling_probe_decreases_with_h(airy):
    pts = [(0.0, -0.35), (0.3, -0.40)]
    out = filling_probe(airy, pts, [2.0 ** -4, 2.0 ** -5],
                        lambda h: Grid1D(-1.0, 1.0, 160))
    assert out.shape == (2, 2)
    assert np.all(out[:, 0] > out[:, 1])
    assert np.all(out > 0.0)
