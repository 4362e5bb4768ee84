"""Finite frames of pseudomodes: defect, semigroup bounds, regularized
inversion, reconstruction, approximate evolution, quantization.

The Hilbert space is the quadrature-weighted l2 on the sample grid; the
coefficient space C^N carries the plain Euclidean (counting-measure) norm.
Operator norms between the two therefore scale with W^(1/2) on the grid side
only.  Columns need not be independent: overcomplete frames with large
condition numbers are expected and allowed.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .errors import BoundViolationError, PreconditionError

#: regularization below which (E*E + delta I) solves turn unreliable in
#: double precision for badly conditioned frames; callers get a warning,
#: not an error
COND_WARN = 1e12


def _weights_of(x, weights):
    if weights is not None:
        w = np.asarray(weights, dtype=float)
        if w.shape != np.shape(x) or np.any(w <= 0.0):
            raise PreconditionError("weights must be positive, one per node")
        return w
    x = np.asarray(x, dtype=float)
    w = np.empty_like(x)
    w[1:-1] = (x[2:] - x[:-2]) / 2.0
    w[0] = (x[1] - x[0]) / 2.0
    w[-1] = (x[-1] - x[-2]) / 2.0
    return w


@dataclass
class FrameMatrix:
    """Synthesis matrix E whose columns are unit pseudomodes on one grid.

    lam holds the symbol value z per column; provenance records
    (kind, u, xi, h, n) so reports can name their columns.  E maps Euclidean
    coefficient vectors to weighted-l2 grid functions.
    """

    E: np.ndarray
    lam: np.ndarray
    x: np.ndarray
    weights: np.ndarray
    provenance: list = field(default_factory=list)
    # normalized=False admits raw matrices (regularized inversion and the
    # quantization maps are well defined for any E, unit columns or not)
    normalized: bool = True

    def __post_init__(self):
        self.E = np.asarray(self.E, dtype=complex)
        self.lam = np.asarray(self.lam, dtype=complex)
        self.x = np.asarray(self.x, dtype=float)
        self.weights = np.asarray(self.weights, dtype=float)
        if self.E.ndim != 2:
            raise PreconditionError("E must be a matrix")
        if self.lam.shape != (self.E.shape[1],):
            raise PreconditionError("lam length must equal the column count")
        if self.weights.shape != (self.E.shape[0],):
            raise PreconditionError("weights length must equal the row count")
        if self.normalized:
            nrm = np.sqrt(self.weights @ (np.abs(self.E) ** 2))
            if np.any(np.abs(nrm - 1.0) > 1e-10):
                raise PreconditionError(
                    f"columns must have unit weighted norm (worst |n-1| = "
                    f"{float(np.max(np.abs(nrm - 1.0))):.2e})")

    @property
    def n_cols(self):
        return self.E.shape[1]

    def adjoint(self):
        """Weighted adjoint E* = E^H W, an (N x m) map to coefficients."""
        return self.E.conj().T * self.weights[None, :]

    def scaled(self):
        """W^(1/2) E: plain 2-norms of this matrix are operator norms of E."""
        return np.sqrt(self.weights)[:, None] * self.E

    def synthesize(self, phi):
        return self.E @ np.asarray(phi, dtype=complex)

    def grid_norm(self, f):
        return float(np.sqrt(np.sum(self.weights * np.abs(f) ** 2)))


@dataclass
class EvolutionBound:
    """Semigroup constants ||T_t|| <= M exp(gamma t) plus the measured defect."""

    M: float
    gamma: float
    eps: float

    def __post_init__(self):
        if self.M < 1.0:
            raise PreconditionError("semigroup constant M must be >= 1")


def build_frame(modes, x, weights=None):
    """Resample pseudomodes on a common grid and normalize the columns.

    Every mode is re-evaluated through its exact closure (no interpolation)
    and divided by its weighted norm on the target grid.  Duplicated or
    linearly dependent modes are fine; nothing here requires independence.
    """
    if not modes:
        raise PreconditionError("build_frame needs at least one mode")
    x = np.asarray(x, dtype=float)
    w = _weights_of(x, weights)
    cols = np.empty((x.size, len(modes)), dtype=complex)
    lam = np.empty(len(modes), dtype=complex)
    prov = []
    for j, mode in enumerate(modes):
        v = mode.evaluate(x)
        nrm = np.sqrt(np.sum(w * np.abs(v) ** 2))
        if nrm == 0.0:
            raise PreconditionError(f"mode {j} vanishes on the frame grid")
        cols[:, j] = v / nrm
        lam[j] = mode.z
        prov.append((mode.kind, mode.u, mode.xi, mode.h, mode.n))
    return FrameMatrix(E=cols, lam=lam, x=x, weights=w, provenance=prov)


def _check_op(A, F):
    A = np.asarray(A, dtype=complex)
    if A.shape != (F.E.shape[0], F.E.shape[0]):
        raise PreconditionError(
            f"operator is {A.shape}, frame grid has {F.E.shape[0]} nodes")
    return A


def defect(A, F):
    """epsilon = ||AE - E Lambda||, the one number feeding every bound.

    Largest singular value of W^(1/2)(AE - E diag(lam)): the Euclidean-to-
    weighted-l2 operator norm of the residual map.
    """
    A = _check_op(A, F)
    R = A @ F.E - F.E * F.lam[None, :]
    return float(sla.svdvals(np.sqrt(F.weights)[:, None] * R)[0])


def analytic_defect(cf, modes, x, weights=None):
    """||L_h E - E Lambda|| with L_h applied through exact mode derivatives.

    The stencil-free twin of defect(): order fits of the defect against h
    live above stencil noise only on this path.  Columns are normalized the
    same way build_frame normalizes them.
    """
    if not modes:
        raise PreconditionError("need at least one mode")
    x = np.asarray(x, dtype=float)
    w = _weights_of(x, weights)
    a = cf.a.values(x)
    b = cf.b.values(x)
    c = cf.c.values(x)
    R = np.empty((x.size, len(modes)), dtype=complex)
    for j, mode in enumerate(modes):
        f = mode.evaluate(x)
        fp = mode.evaluate(x, 1)
        fpp = mode.evaluate(x, 2)
        nrm = np.sqrt(np.sum(w * np.abs(f) ** 2))
        if nrm == 0.0:
            raise PreconditionError(f"mode {j} vanishes on the grid")
        lf = -mode.h ** 2 * a * fpp - 1j * mode.h * b * fp + c * f
        R[:, j] = (lf - mode.z * f) / nrm
    return float(sla.svdvals(np.sqrt(w)[:, None] * R)[0])


def column_residual_max(A, F):
    """max_n ||A e_n - lam_n e_n||: the l1-synthesis defect.

    For coefficients measured in l1 this max *is* the operator norm of
    AE - E Lambda, since the extreme points of the unit ball are the basis
    vectors.
    """
    A = _check_op(A, F)
    R = A @ F.E - F.E * F.lam[None, :]
    return float(np.max(np.sqrt(F.weights @ (np.abs(R) ** 2))))


def numerical_abscissa(A, weights):
    """gamma with ||exp(tA)|| <= exp(gamma t) in the weighted norm (M = 1)."""
    A = np.asarray(A, dtype=complex)
    sw = np.sqrt(np.asarray(weights, dtype=float))
    S = sw[:, None] * A / sw[None, :]
    H = (S + S.conj().T) / 2.0
    return float(sla.eigvalsh(H)[-1])


def semigroup_bound_check(A, F, M, gamma, t_list, eprime=None, slack=0.05,
                          strict=True):
    """Verify ||T_t E - E exp(Lambda t)|| <= eps t M exp(gamma t) per t.

    T_t = expm(tA) is the dense reference propagator; slack covers its own
    error.  If eprime (a matrix with ||E - E'|| < eps) is given, the
    perturbed-frame variant <= eps (1 + M + tM) exp(gamma t) is checked too.
    Returns a list of report rows (t, lhs, bound, ratio); with strict=True a
    violated row raises instead of being returned quietly.
    """
    A = _check_op(A, F)
    if M < 1.0:
        raise PreconditionError("semigroup constant M must be >= 1")
    margin = 1e-12 * max(1.0, abs(gamma))
    worst = float(np.max(F.lam.real))
    if worst > gamma + margin:
        raise PreconditionError(
            f"hypothesis Re(lam) <= gamma fails: max Re(lam) = {worst:.6g} "
            f"> gamma = {gamma:.6g}")
    eps = defect(A, F)
    sw = np.sqrt(F.weights)
    rows = []
    if eprime is not None:
        eprime = np.asarray(eprime, dtype=complex)
        dist = float(sla.svdvals(sw[:, None] * (F.E - eprime))[0])
        if dist >= eps and dist > 0.0:
            raise PreconditionError(
                f"||E - E'|| = {dist:.3e} is not below the defect {eps:.3e}")
    for t in t_list:
        if t < 0.0:
            raise PreconditionError("semigroup bound holds for t >= 0 only")
        Tt = sla.expm(t * A)
        grow = np.exp(F.lam * t)
        lhs = float(sla.svdvals(sw[:, None] * (Tt @ F.E - F.E * grow[None, :]))[0])
        bound = eps * t * M * np.exp(gamma * t)
        ratio = lhs / bound if bound > 0.0 else np.inf
        ok = lhs <= bound * (1.0 + slack) + 1e-14
        rows.append({"t": t, "lhs": lhs, "bound": bound, "ratio": ratio,
                     "ok": ok})
        if strict and not ok:
            raise BoundViolationError(
                f"semigroup bound fails at t={t}: lhs={lhs:.6e} > "
                f"bound={bound:.6e} (+{slack:.0%})")
        if eprime is not None:
            lhs2 = float(sla.svdvals(
                sw[:, None] * (Tt @ eprime - eprime * grow[None, :]))[0])
            bound2 = eps * (1.0 + M + t * M) * np.exp(gamma * t)
            ok2 = lhs2 <= bound2 * (1.0 + slack) + 1e-14
            rows.append({"t": t, "lhs": lhs2, "bound": bound2,
                         "ratio": lhs2 / bound2 if bound2 > 0 else np.inf,
                         "ok": ok2, "variant": "eprime"})
            if strict and not ok2:
                raise BoundViolationError(
                    f"perturbed-frame bound fails at t={t}: lhs={lhs2:.6e} > "
                    f"bound={bound2:.6e} (+{slack:.0%})")
    return rows


def regularized_inverse(F, delta=1e-6):
    """F_delta = (E*E + delta I)^(-1) E* with the weighted adjoint.

    Computed through the SVD of W^(1/2)E as V s/(s^2+delta) U* W^(1/2): the
    forward error then scales with s_max/sqrt(delta) instead of the squared
    s_max^2/delta an explicit normal-equation solve would pay.  The proved
    norm bounds ||F_delta|| <= delta^(-1/2) and ||E F_delta|| <= 1 are
    re-verified on the result and a violation (beyond 1e-10 slack) raises.
    """
    if not delta > 0.0:
        raise PreconditionError("regularization delta must be positive")
    m, n = F.E.shape
    sw = np.sqrt(F.weights)
    U, s, Vh = sla.svd(sw[:, None] * F.E, full_matrices=False)
    # Gram eigenvalues are s^2 padded with zeros whenever columns outnumber rows
    top = s[0] ** 2 if s.size else 0.0
    bot = s[-1] ** 2 if (s.size and n <= m) else 0.0
    cond = (top + delta) / (bot + delta)
    if cond > COND_WARN:
        warnings.warn(
            f"(E*E + delta I) condition number {cond:.2e} exceeds "
            f"{COND_WARN:.0e}; results may be unreliable at this delta",
            stacklevel=2)
    Fd = (Vh.conj().T * (s / (s ** 2 + delta))) @ (U.conj().T * sw[None, :])
    nf, nef = frame_bounds(F, delta, Fd)
    if nf > delta ** -0.5 * (1.0 + 1e-10):
        raise BoundViolationError(
            f"||F_delta|| = {nf:.6e} exceeds delta^(-1/2) = {delta ** -0.5:.6e}")
    if nef > 1.0 + 1e-10:
        raise BoundViolationError(f"||E F_delta|| = {nef:.6e} exceeds 1")
    return Fd


def frame_bounds(F, delta, Fd=None):
    """(||F_delta||, ||E F_delta||) as weighted operator norms."""
    if Fd is None:
        Fd = regularized_inverse(F, delta)
    isw = 1.0 / np.sqrt(F.weights)
    nf = float(sla.svdvals(Fd * isw[None, :])[0])
    sw = np.sqrt(F.weights)
    nef = float(sla.svdvals(sw[:, None] * (F.E @ Fd) * isw[None, :])[0])
    return nf, nef


def reconstruct(F, f, delta=1e-6):
    """(phi, ||f - E phi||) for phi = F_delta f.

    For f in the column span the error decreases monotonically along a
    shrinking delta ladder; for f orthogonal to every column E phi = 0 and
    the error equals ||f|| at every delta.
    """
    f = np.asarray(f, dtype=complex)
    phi = regularized_inverse(F, delta) @ f
    err = F.grid_norm(f - F.E @ phi)
    return phi, err


def evolve_approx(A, F, f, delta, t, M, gamma, slack=0.05, strict=True):
    """Approximate T_t f by E exp(Lambda t) F_delta f with an a-priori budget.

    Returns (state, true_err, budget): the true error is measured against the
    dense expm propagator and must sit below
    ||f - E phi|| M exp(gamma t) + eps ||phi|| t M exp(gamma t)
    up to the reference slack.
    """
    A = _check_op(A, F)
    if M < 1.0:
        raise PreconditionError("semigroup constant M must be >= 1")
    worst = float(np.max(F.lam.real))
    if worst > gamma + 1e-12 * max(1.0, abs(gamma)):
        raise PreconditionError(
            f"hypothesis Re(lam) <= gamma fails: max Re(lam) = {worst:.6g}")
    f = np.asarray(f, dtype=complex)
    eps = defect(A, F)
    phi, recon = reconstruct(F, f, delta)
    state = F.E @ (np.exp(F.lam * t) * phi)
    ref = sla.expm(t * A) @ f
    true_err = F.grid_norm(state - ref)
    budget = (recon * M * np.exp(gamma * t)
              + eps * float(np.linalg.norm(phi)) * t * M * np.exp(gamma * t))
    if strict and true_err > budget * (1.0 + slack) + 1e-14:
        raise BoundViolationError(
            f"evolution error {true_err:.6e} exceeds budget {budget:.6e} "
            f"(+{slack:.0%}) at t={t}")
    return state, true_err, budget


def pseudospectrum_inclusion(A, F, eps):
    """Per-column report: is lam_n inside the eps-pseudospectrum of A?

    Rows are (lam, smin, eps, ok) with smin the smallest singular value of
    A - lam I in the weighted geometry.  Nothing is asserted: with eps at or
    below the defect the inclusion theorem is silent and failures are
    legitimate data.
    """
    A = _check_op(A, F)
    sw = np.sqrt(F.weights)
    eye = np.eye(A.shape[0])
    rows = []
    for lam in F.lam:
        S = sw[:, None] * (A - lam * eye) / sw[None, :]
        smin = float(sla.svdvals(S)[-1])
        rows.append({"lam": lam, "smin": smin, "eps": eps, "ok": smin < eps})
    return rows


def quantize(F, f_vals):
    """Q(f) = E diag(f) E*: the POV-measure quantization of grid symbol values."""
    f_vals = np.asarray(f_vals)
    if f_vals.shape != (F.n_cols,):
        raise PreconditionError("need one value per frame column")
    return F.E @ (f_vals[:, None] * F.adjoint())


def quantize_regularized(F, f_vals, delta=1e-6):
    """S_delta(f) = E diag(f) F_delta, the compromise for E M_f E^(-1)."""
    f_vals = np.asarray(f_vals)
    if f_vals.shape != (F.n_cols,):
        raise PreconditionError("need one value per frame column")
    return F.E @ (f_vals[:, None] * regularized_inverse(F, delta))


def positivity_floor(F, f_vals):
    """Smallest eigenvalue of Q(f) in the weighted inner product.

    Q(f) is similar to the manifestly Hermitian B diag(f) B^H with
    B = W^(1/2) E, so for real f >= 0 the floor is 0 up to roundoff.
    """
    f_vals = np.asarray(f_vals)
    if np.iscomplexobj(f_vals) and np.any(np.abs(f_vals.imag) > 0.0):
        raise PreconditionError("positivity is only meaningful for real values")
    B = F.scaled()
    H = B @ (f_vals.real[:, None] * B.conj().T)
    H = (H + H.conj().T) / 2.0
    return float(sla.eigvalsh(H)[0])


def homomorphism_defect(F, f_vals, g_vals, delta=1e-6):
    """||S_delta(fg) - S_delta(f) S_delta(g)|| in the weighted norm.

    The exact E M_f E^(-1) would be multiplicative; this records how far the
    regularized compromise is from that, for whoever wants to tune delta.
    """
    f_vals = np.asarray(f_vals)
    g_vals = np.asarray(g_vals)
    D = (quantize_regularized(F, f_vals * g_vals, delta)
         - quantize_regularized(F, f_vals, delta)
         @ quantize_regularized(F, g_vals, delta))
    sw = np.sqrt(F.weights)
    return float(sla.svdvals(sw[:, None] * D / sw[None, :])[0])
