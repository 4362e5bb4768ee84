"""Grids, dense discretization, residual measurement, resolvent maps, propagation.

Residual orders are always measured through the analytic path (modes carry
exact first and second derivatives): the target orders reach O(h^4), which is
unreachable through stencil noise at practical resolutions.  The dense
discretization exists for building the operator in frame/pseudospectra work
and for low-order cross-checks.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .errors import ConvergenceError, PreconditionError
from .symbol import principal_symbol


@dataclass
class Grid1D:
    """Uniform grid on [lo, hi] with trapezoid quadrature weights."""

    lo: float
    hi: float
    m: int
    x: np.ndarray = field(default=None, repr=False)
    weights: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self.m < 8:
            raise ValueError("grid needs at least 8 points")
        if not self.lo < self.hi:
            raise ValueError("grid interval is empty")
        self.x = np.linspace(self.lo, self.hi, self.m)
        dx = self.x[1] - self.x[0]
        w = np.full(self.m, dx)
        w[0] = w[-1] = dx / 2.0
        self.weights = w

    @property
    def dx(self):
        return self.x[1] - self.x[0]


class BoundaryCondition:
    """Descriptor for the two endpoint rows of the dense discretization."""

    def __init__(self, kind, coef_deriv=None, coef_value=None):
        if kind not in ("dirichlet", "robin"):
            raise ValueError("bc kind must be 'dirichlet' or 'robin'")
        if kind == "robin":
            if coef_deriv is None or coef_value is None:
                raise ValueError("robin bc needs coef_deriv and coef_value")
            if coef_deriv == 0 and coef_value == 0:
                raise PreconditionError("robin coefficients must not both vanish")
        self.kind = kind
        self.coef_deriv = coef_deriv
        self.coef_value = coef_value

    def __repr__(self):
        if self.kind == "dirichlet":
            return "BoundaryCondition(dirichlet)"
        return f"BoundaryCondition(robin, {self.coef_deriv}, {self.coef_value})"


@dataclass
class DenseOperator:
    """Dense matrix of L_h with boundary rows encoding the bc exactly.

    Matrix rows 0 and m-1 carry the boundary condition functionals; interior
    rows carry -h^2 a d2 - i h b d1 + c through 4th-order central stencils
    (2nd-order at the two near-boundary rows).  Spectral and semigroup work
    uses reduced(), the square operator on the interior unknowns with the two
    boundary values eliminated through the bc rows.
    """

    matrix: np.ndarray
    bc: BoundaryCondition
    h: float
    grid: Grid1D
    _reduced: np.ndarray = field(default=None, repr=False)

    @property
    def x_interior(self):
        return self.grid.x[1:-1]

    @property
    def w_interior(self):
        # interior nodes of a uniform trapezoid rule all carry weight dx
        return np.full(self.grid.m - 2, self.grid.dx)

    def reduced(self):
        """Square operator on interior nodes after eliminating the bc rows."""
        if self._reduced is None:
            A = self.matrix
            m = self.grid.m
            bidx = [0, m - 1]
            iidx = np.arange(1, m - 1)
            Cb = A[np.ix_(bidx, bidx)]
            Ci = A[np.ix_(bidx, iidx)]
            try:
                elim = -np.linalg.solve(Cb, Ci)  # x_b = elim @ x_i
            except np.linalg.LinAlgError as exc:
                raise PreconditionError("boundary rows are singular") from exc
            Aint = A[np.ix_(iidx, iidx)]
            Abnd = A[np.ix_(iidx, bidx)]
            self._reduced = Aint + Abnd @ elim
        return self._reduced


def discretize(cf, h, grid, bc):
    """Dense discretization of L_h = -h^2 a d2 - i h b d1 + c on the grid."""
    if not 0.0 < h <= 1.0:
        raise PreconditionError(f"h={h} outside (0, 1]")
    cf.require_inside(grid.lo, "grid edge")
    cf.require_inside(grid.hi, "grid edge")
    m, dx = grid.m, grid.dx
    a = cf.a.values(grid.x)
    b = cf.b.values(grid.x)
    c = cf.c.values(grid.x)
    A = np.zeros((m, m), dtype=complex)

    d1_4 = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / (12.0 * dx)
    d2_4 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / (12.0 * dx ** 2)
    d1_2 = np.array([-1.0, 0.0, 1.0]) / (2.0 * dx)
    d2_2 = np.array([1.0, -2.0, 1.0]) / dx ** 2

    for i in range(1, m - 1):
        if 2 <= i <= m - 3:
            sl = slice(i - 2, i + 3)
            s1, s2 = d1_4, d2_4
        else:
            sl = slice(i - 1, i + 2)
            s1, s2 = d1_2, d2_2
        A[i, sl] += -h ** 2 * a[i] * s2 - 1j * h * b[i] * s1
        A[i, i] += c[i]

    if bc.kind == "dirichlet":
        A[0, 0] = 1.0
        A[-1, -1] = 1.0
    else:
        # one-sided 3-point first derivative in coef_deriv * h * f' + coef_value * f
        cd, cv = bc.coef_deriv, bc.coef_value
        A[0, 0] = cd * h * (-3.0) / (2.0 * dx) + cv
        A[0, 1] = cd * h * 4.0 / (2.0 * dx)
        A[0, 2] = cd * h * (-1.0) / (2.0 * dx)
        A[-1, -1] = cd * h * 3.0 / (2.0 * dx) + cv
        A[-1, -2] = cd * h * (-4.0) / (2.0 * dx)
        A[-1, -3] = cd * h * 1.0 / (2.0 * dx)
    return DenseOperator(matrix=A, bc=bc, h=h, grid=grid)


def apply_operator(cf, h, mode):
    """L_h f through the mode's analytic derivatives, sampled on its grid."""
    a = cf.a.values(mode.x)
    b = cf.b.values(mode.x)
    c = cf.c.values(mode.x)
    return -h ** 2 * a * mode.fpp - 1j * h * b * mode.fp + c * mode.f


def _window_mask(mode, window):
    """Boolean mask of the measurement window on the mode grid.

    'support': the whole sample grid.  'plateau': the inner window where the
    cutoff is identically 1, i.e. the region where the phase expansion alone
    defines the mode.  'auto' resolves to 'plateau' for phase-bearing kinds
    and 'support' for rough packets (whose residual *is* the envelope
    derivative, which lives outside the plateau).
    """
    if window == "auto":
        window = "support" if mode.kind == "rough" else "plateau"
    if window == "support" or mode.cutoff is None:
        return np.ones(mode.x.size, dtype=bool)
    if window != "plateau":
        raise ValueError("window must be 'auto', 'support' or 'plateau'")
    s = mode.x - mode.u
    half = 0.5 * mode.cutoff.delta
    if getattr(mode.cutoff, "one_sided", False):
        return (s >= 0.0) & (s <= half)
    return np.abs(s) <= half


def residual_triple(mode, cf, window="auto"):
    """(rQ, rP, rL, norm): residual norms relative to ||f|| on the window.

    position: ||(Q - u) f|| with Q multiplication by x (boundary modes use
    u = 0, i.e. ||Q f||); momentum: ||(P - xi) f|| with P = -i h d/dx;
    operator: ||(L_h - z) f||; norm is ||f|| itself on the window.  For
    combined boundary modes without a single xi the momentum entry is NaN.

    By default phase-built modes are measured on the cutoff plateau, where
    the envelope is exactly 1 and the measured operator residual is the
    expansion defect of order h^(n+2); on 'support' the cutoff's own
    transition terms (of size ~ exp(-c/h), dominant at moderate h) are
    included.  Rough packets are always measured on their support.
    """
    mask = _window_mask(mode, window)
    x = mode.x[mask]
    if x.size < 8:
        raise PreconditionError("measurement window contains too few samples")
    w = np.empty_like(x)
    w[1:-1] = (x[2:] - x[:-2]) / 2.0
    w[0] = (x[1] - x[0]) / 2.0
    w[-1] = (x[-1] - x[-2]) / 2.0
    f = mode.f[mask]
    fp = mode.fp[mask]
    fpp = mode.fpp[mask]

    def wnorm(v):
        return float(np.sqrt(np.sum(w * np.abs(v) ** 2)))

    nrm = wnorm(f)
    if nrm == 0.0:
        raise PreconditionError("mode has zero norm on the measurement window")
    rq = wnorm((x - mode.u) * f) / nrm
    if mode.xi is None:
        rp = float("nan")
    else:
        rp = wnorm(-1j * mode.h * fp - mode.xi * f) / nrm
    a = cf.a.values(x)
    b = cf.b.values(x)
    c = cf.c.values(x)
    lf = -mode.h ** 2 * a * fpp - 1j * mode.h * b * fp + c * f
    rl = wnorm(lf - mode.z * f) / nrm
    return rq, rp, rl, nrm


def residual_stencil(mode, cf, m=4096, window="auto"):
    """rL recomputed through finite differences instead of analytic derivatives.

    Resamples the mode on a uniform m-point grid over its span, applies the
    4th-order interior stencils, and measures ||L_h f - z f||/||f|| on the
    same window as residual_triple.  Exists purely as a cross-check on the
    analytic path (and vice versa); order fits must not use it, since h^(n+2)
    sits below stencil noise at practical resolutions.
    """
    if m < 64:
        raise PreconditionError("stencil cross-check needs a fine grid")
    x = np.linspace(mode.x[0], mode.x[-1], m)
    dx = x[1] - x[0]
    f = mode.evaluate(x)
    fp = np.empty_like(f)
    fpp = np.empty_like(f)
    fp[2:-2] = (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12.0 * dx)
    fpp[2:-2] = (-f[:-4] + 16 * f[1:-3] - 30 * f[2:-2]
                 + 16 * f[3:-1] - f[4:]) / (12.0 * dx ** 2)
    fp[:2] = fp[2]
    fp[-2:] = fp[-3]
    fpp[:2] = fpp[2]
    fpp[-2:] = fpp[-3]
    proxy = type(mode)(
        kind=mode.kind, h=mode.h, n=mode.n, u=mode.u, xi=mode.xi, z=mode.z,
        phase=mode.phase, cutoff=mode.cutoff, x=x, f=f, fp=fp, fpp=fpp,
        weights=np.full(m, dx))
    # drop the edge rows carrying copied derivatives
    mask = _window_mask(proxy, window)
    mask[:2] = mask[-2:] = False
    w = np.full(m, dx)
    fw, fpw, fppw = f[mask], fp[mask], fpp[mask]
    xw, ww = x[mask], w[mask]
    nrm = float(np.sqrt(np.sum(ww * np.abs(fw) ** 2)))
    if nrm == 0.0:
        raise PreconditionError("mode has zero norm on the measurement window")
    lf = (-mode.h ** 2 * cf.a.values(xw) * fppw
          - 1j * mode.h * cf.b.values(xw) * fpw + cf.c.values(xw) * fw)
    return float(np.sqrt(np.sum(ww * np.abs(lf - mode.z * fw) ** 2))) / nrm


def order_fit(h_values, r_values):
    """Least-squares slope of log r against log h; returns (slope, intercept, r2)."""
    h_values = np.asarray(h_values, dtype=float)
    r_values = np.asarray(r_values, dtype=float)
    if np.any(h_values <= 0) or np.any(r_values <= 0):
        raise PreconditionError("order fit needs positive h and residual values")
    x = np.log(h_values)
    y = np.log(r_values)
    slope, intercept = np.polyfit(x, y, 1)
    yhat = slope * x + intercept
    ss_res = float(np.sum((y - yhat) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), r2


def _weighted_matrix(M, w):
    sw = np.sqrt(w)
    return sw[:, None] * M / sw[None, :]


def smallest_singular_value(M, w=None, max_iter=500, tol=1e-10):
    """s_min of M (optionally in the weighted geometry) by inverse iteration.

    Power iteration on (M^-1 M^-H) through one LU factorization; returns
    (value, converged).  A singular factorization reports s_min = 0.
    """
    A = _weighted_matrix(M, w) if w is not None else M
    n = A.shape[0]
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", sla.LinAlgWarning)
            lu, piv = sla.lu_factor(A)
    except (sla.LinAlgError, ValueError):
        return 0.0, True
    # an exact zero on U's diagonal means A is singular: s_min = 0
    if not np.all(np.isfinite(lu)) or np.any(np.diag(lu) == 0.0):
        return 0.0, True
    rng = np.random.default_rng(1234)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    lam_old = 0.0
    converged = False
    for _ in range(max_iter):
        y = sla.lu_solve((lu, piv), v, trans=2)  # (A^H)^-1 v
        x = sla.lu_solve((lu, piv), y, trans=0)  # A^-1 y
        lam = float(np.linalg.norm(x))
        if lam == 0.0 or not np.isfinite(lam):
            return 0.0, True
        v = x / lam
        if abs(lam - lam_old) <= tol * lam:
            converged = True
            break
        lam_old = lam
    return 1.0 / np.sqrt(lam), converged


def resolvent_map(op, z_re, z_im, w=None):
    """s_min(L - z) over a complex rectangle grid; flags non-converged cells.

    Returns (smin, ok) arrays of shape (len(z_re), len(z_im)).
    """
    M = op.reduced() if isinstance(op, DenseOperator) else np.asarray(op)
    if w is None and isinstance(op, DenseOperator):
        w = op.w_interior
    smin = np.zeros((len(z_re), len(z_im)))
    ok = np.zeros_like(smin, dtype=bool)
    eye = np.eye(M.shape[0])
    for i, zr in enumerate(z_re):
        for j, zi in enumerate(z_im):
            s, conv = smallest_singular_value(M - (zr + 1j * zi) * eye, w=w)
            smin[i, j] = s
            ok[i, j] = conv
    return smin, ok


def propagate(A, f, t, method="expm", tol=1e-10):
    """exp(t A) f by scaling-and-squaring, or Crank-Nicolson with step doubling."""
    A = np.asarray(A)
    f = np.asarray(f, dtype=complex)
    if t == 0:
        return f.copy()
    if method == "expm":
        return sla.expm(t * A) @ f
    if method == "cn":
        eye = np.eye(A.shape[0])
        prev = None
        nsteps = max(8, int(abs(t) * np.linalg.norm(A, 1) / 4.0) + 1)
        for _ in range(12):
            dt = t / nsteps
            lhs = eye - dt / 2.0 * A
            rhs = eye + dt / 2.0 * A
            lu, piv = sla.lu_factor(lhs)
            g = f.copy()
            for _ in range(nsteps):
                g = sla.lu_solve((lu, piv), rhs @ g)
            if prev is not None:
                scale = max(float(np.linalg.norm(g)), 1e-300)
                if float(np.linalg.norm(g - prev)) <= tol * scale:
                    return g
            prev = g
            nsteps *= 2
        raise ConvergenceError("Crank-Nicolson step doubling did not converge")
    raise ValueError("method must be 'expm' or 'cn'")


def filling_probe(cf, points, h_values, grid_factory, bc=None):
    """s_min(L_h - sigma(u, xi)) across h for in-Omega points.

    grid_factory(h) -> Grid1D lets the resolution track h; returns an array of
    shape (len(points), len(h_values)).
    """
    bc = bc or BoundaryCondition("dirichlet")
    out = np.zeros((len(points), len(h_values)))
    for jh, h in enumerate(h_values):
        grid = grid_factory(h)
        op = discretize(cf, h, grid, bc)
        M = op.reduced()
        eye = np.eye(M.shape[0])
        for ip, (u, xi) in enumerate(points):
            z = principal_symbol(cf, u, xi)
            s, conv = smallest_singular_value(M - z * eye, w=op.w_interior)
            if not conv:
                s, conv = float(np.min(sla.svdvals(_weighted_matrix(
                    M - z * eye, op.w_interior)))), True
            out[ip, jh] = s
    return out
