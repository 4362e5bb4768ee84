"""JWKB quasimode construction for L_h f = -h^2 a f'' - i h b f' + c f.

A quasimode concentrated at an interior phase-space point (u, xi) in Omega has
the form

    f(u + s) = h^(-1/4) chi(s) exp(psi(s)),
    psi(s) = sum_{m=-1}^{n} h^m psi_m(s),

where psi_{-1} solves the eikonal equation

    psi_{-1}(s) = i int_0^s [ -b(u+v)/(2a(u+v)) + sqrt(w(u, xi, v)) ] dv,
    w(u, xi, v) = a(u) xi^2 / a(u+v) + b(u) xi / a(u+v)
                  + b(u+v)^2 / (4 a(u+v)^2) + (c(u) - c(u+v)) / a(u+v),

with the branch pinned by sqrt(w)(0) = xi + b(u)/(2 a(u)), and the transport
corrections psi_m kill the coefficient of h^(m+1) in exp(-psi) L_h exp(psi):

    psi_m(s) = int_0^s F_m / (2 a psi_{-1}' + i b) dv,
    F_m = -a(u+s) [ psi_{m-1}'' + sum_{i+j=m-1, i,j>=0} psi_i' psi_j' ].

All series run at an internally padded degree so the stored coefficients up to
the requested degree K are exact, which makes the order-(m+1) cancellations
verifiable coefficient by coefficient (see phi_coefficient_series).

Everything here is expressed through the offset s from the anchor; the same
core serves the boundary-layer construction (complex xi, one-sided cutoff) in
the boundary module.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.special import gamma as _gamma

from ._series import Series
from .cutoff import CutoffSpec
from .errors import (
    NotInOmegaError,
    PreconditionError,
    SingularPointError,
    TruncationError,
)
from .symbol import in_omega, principal_symbol, twist_curvature

DEFAULT_K = 24
DEFAULT_NPTS = 2048
DELTA0 = 0.5


@dataclass
class PhaseSeries:
    """Truncated phase expansion psi = sum h^m psi_m about an anchor point.

    psi[j] is the series of psi_{m} with m = j - 1 (so psi[0] is the eikonal
    term psi_{-1});  all terms vanish at s = 0 and the eikonal's linear
    coefficient is exactly i*xi.
    """

    u: float
    xi: complex
    n: int
    K: int
    psi: list
    one_sided: bool = False
    _d1: list = field(default=None, repr=False)
    _d2: list = field(default=None, repr=False)

    def __post_init__(self):
        if self._d1 is None:
            self._d1 = [p.deriv() for p in self.psi]
            self._d2 = [p.deriv() for p in self._d1]

    def psi_m(self, m):
        if not -1 <= m <= self.n:
            raise IndexError(f"phase term m={m} outside [-1, {self.n}]")
        return self.psi[m + 1]

    @property
    def twist(self):
        """Quadratic coefficient doubled: k such that psi_{-1} = i xi s + k s^2/2 + ..."""
        return 2.0 * self.psi[0].c[2] if self.psi[0].degree >= 2 else 0.0 + 0.0j

    def _sum(self, series_list, h, s):
        out = np.zeros(np.shape(np.asarray(s)), dtype=complex)
        for j, p in enumerate(series_list):
            out = out + h ** (j - 1) * p(s)
        return out

    def eval(self, h, s):
        return self._sum(self.psi, h, s)

    def eval_d1(self, h, s):
        return self._sum(self._d1, h, s)

    def eval_d2(self, h, s):
        return self._sum(self._d2, h, s)


def _phase_core(ja, jb, jc, xi, n, K):
    """Shared eikonal + transport recursion from coefficient jets.

    ja/jb/jc are Taylor jets about the anchor of length >= pad+1 where
    pad = K + 2(n+2); returns the list [psi_{-1}, psi_0, ..., psi_n]
    truncated to degree K.
    """
    pad = K + 2 * (max(n, 0) + 2)
    if min(ja.size, jb.size, jc.size) < pad + 1:
        raise ValueError("insufficient jet length for padded recursion")
    A = Series(ja[: pad + 1])
    B = Series(jb[: pad + 1])
    C = Series(jc[: pad + 1])
    a0, b0, c0 = A.c[0], B.c[0], C.c[0]
    sigma = a0 * xi ** 2 + b0 * xi + c0
    sigma_xi = 2.0 * a0 * xi + b0

    w = (a0 * xi ** 2 + b0 * xi) / A + (B * B) / ((A * A) * 4.0) + (c0 - C) / A
    branch = xi + b0 / (2.0 * a0)
    sqrt_w = w.sqrt(branch)  # raises BranchPointError when w(0) = 0
    psi_m1 = ((B / A) * (-0.5) + sqrt_w).integ() * 1j

    psis = [psi_m1]
    if n >= 0:
        scale = max(abs(sigma_xi), abs(xi), 1.0)
        if abs(sigma_xi) <= 1e-14 * scale:
            raise SingularPointError("transport denominator i*sigma_xi vanishes")
        d1 = [psi_m1.deriv()]
        denom = A * d1[0] * 2.0 + B * 1j
        for m in range(0, n + 1):
            Fm = d1[m].deriv()  # psi''_{m-1}
            if m >= 1:
                conv = Series.constant(0.0, Fm.degree)
                for i in range(0, m):
                    conv = conv + d1[i + 1] * d1[m - i]
                Fm = Fm + conv
            Fm = -(A * Fm)
            psi_next = (Fm / denom).integ()
            psis.append(psi_next)
            d1.append(psi_next.deriv())
    return [p.truncated(K) for p in psis], sigma


def eikonal_phase(cf, u, xi, K=DEFAULT_K):
    """Eikonal term psi_{-1} at an interior phase-space point of Omega."""
    u = float(u)
    xi = float(xi)
    cf.require_inside(u, "anchor")
    if not in_omega(cf, u, xi):
        raise NotInOmegaError(f"(u, xi)=({u}, {xi}) has non-positive bracket")
    pad = K + 4
    psis, _ = _phase_core(*cf.jets(u, pad), xi, -1, K)
    return psis[0]


def transport_recursion(cf, u, xi, n, K=DEFAULT_K):
    """Full phase expansion [psi_{-1}, ..., psi_n] at an interior point (n >= -1)."""
    u = float(u)
    xi = float(xi)
    if n < -1:
        raise ValueError("truncation level n must be >= -1")
    cf.require_inside(u, "anchor")
    if not in_omega(cf, u, xi):
        raise NotInOmegaError(f"(u, xi)=({u}, {xi}) has non-positive bracket")
    pad = K + 2 * (max(n, 0) + 2)
    psis, _ = _phase_core(*cf.jets(u, pad), xi, n, K)
    return PhaseSeries(u=u, xi=complex(xi), n=n, K=K, psi=psis)


def phi_coefficient_series(cf, phase, p):
    """Order-p coefficient phi_p of exp(-psi)(L_h - sigma) exp(psi) as a series.

    For a correct transport recursion phi_p vanishes identically (to the
    retained degree) for 1 <= p <= n+1; phi_0 is the eikonal identity and
    vanishes as well.  Degrees above K-2 are not meaningful.
    """
    K = phase.K
    ja, jb, jc = cf.jets(phase.u, K)
    A, B, C = Series(ja), Series(jb), Series(jc)
    xi = phase.xi
    sigma = A.c[0] * xi ** 2 + B.c[0] * xi + C.c[0]

    def d1(m):
        return phase._d1[m + 1] if -1 <= m <= phase.n else None

    def d2(m):
        return phase._d2[m + 1] if -1 <= m <= phase.n else None

    out = Series.constant(0.0, K - 2 if K >= 2 else 0)
    t = d2(p - 2)
    if t is not None:
        out = out + t
    conv = None
    for i in range(-1, phase.n + 1):
        j = p - 2 - i
        if -1 <= j <= phase.n:
            term = d1(i) * d1(j)
            conv = term if conv is None else conv + term
    if conv is not None:
        out = out + conv
    out = -(A * out)
    t = d1(p - 1)
    if t is not None:
        out = out - (B * t) * 1j
    if p == 0:
        out = out + (C - sigma)
    return out.truncated(min(out.degree, K - 2))


def choose_delta(phase, delta0=DELTA0, sharpness=1.0, tail_tol=1e-10,
                 ladder_max=40, n_probe=257):
    """Largest cutoff width from the geometric ladder delta0 * 2^-j.

    Acceptance requires the decay-rate profile F built from the eikonal term
    (quadratic rate -2 Re psi_{-1}(s)/s^2 in the interior, linear rate
    -2 Re psi_{-1}(s)/s at the boundary) to stay above F(0)/2 on the probe
    grid, and the series truncation tail of every phase term to sit below
    tail_tol at radius delta.
    """
    eik = phase.psi[0]
    if phase.one_sided:
        F0 = -2.0 * float(np.real(eik.c[1]))  # = 2 Im xi
        order = 1
        bad = PreconditionError("boundary covector must have Im(xi) > 0")
    else:
        F0 = -2.0 * float(np.real(eik.c[2]))  # = -Re k
        order = 2
        bad = NotInOmegaError("twist curvature has non-negative real part")
    if F0 <= 0.0:
        raise bad
    for j in range(ladder_max + 1):
        delta = delta0 * 2.0 ** (-j)
        if phase.one_sided:
            s = np.linspace(delta / n_probe, delta, n_probe)
        else:
            s = np.linspace(-delta, delta, n_probe)
            s = s[np.abs(s) > delta / (4.0 * n_probe)]
        F = -2.0 * np.real(eik(s)) / s ** order
        tail = max(p.tail_bound(delta) for p in phase.psi)
        if np.min(F) >= 0.5 * F0 and tail <= tail_tol:
            return CutoffSpec(delta, sharpness=sharpness, one_sided=phase.one_sided)
    raise TruncationError(
        "no admissible cutoff width on the ladder; increase K or check the point"
    )


@dataclass
class Pseudomode:
    """A concentrated quasimode with analytic first and second derivatives.

    kind is one of 'interior', 'rough', 'boundary', 'gaussian'.  Samples f,
    fp, fpp live on the stored grid x with trapezoid weights; evaluate()
    resamples exactly (no interpolation) through the stored closure.
    """

    kind: str
    h: float
    n: int
    u: float
    xi: complex
    z: complex
    phase: object
    cutoff: object
    x: np.ndarray
    f: np.ndarray
    fp: np.ndarray
    fpp: np.ndarray
    weights: np.ndarray
    _evaluator: object = field(default=None, repr=False)

    def evaluate(self, xs, order=0):
        """Resample the mode (order-th derivative, 0..2) on arbitrary abscissae."""
        if self._evaluator is None:
            raise PreconditionError("mode carries no evaluator")
        return self._evaluator(np.asarray(xs, dtype=float), order)

    def norm(self):
        return float(np.sqrt(np.sum(self.weights * np.abs(self.f) ** 2)))

    def weighted_dot(self, other_samples):
        return complex(np.sum(self.weights * np.conj(self.f) * other_samples))


def _trapezoid_weights(x):
    w = np.empty_like(x)
    w[1:-1] = (x[2:] - x[:-2]) / 2.0
    w[0] = (x[1] - x[0]) / 2.0
    w[-1] = (x[-1] - x[-2]) / 2.0
    return w


def _phase_evaluator(phase, cutoff, h, u, prefactor):
    """Closure computing (f, f', f'') for f = prefactor * chi(s) exp(psi(h, s))."""

    def ev(xs, order):
        s = np.asarray(xs, dtype=float) - u
        out = np.zeros(s.shape, dtype=complex)
        if cutoff is None:
            live = np.ones(s.shape, dtype=bool)
            chi = np.ones(s.shape)
            dchi = np.zeros(s.shape)
            d2chi = np.zeros(s.shape)
        else:
            if cutoff.one_sided:
                live = (s >= 0.0) & (s < cutoff.delta)
            else:
                live = np.abs(s) < cutoff.delta
            chi = cutoff.chi(s[live])
            dchi = cutoff.dchi(s[live])
            d2chi = cutoff.d2chi(s[live])
        sl = s[live]
        e = prefactor * np.exp(phase.eval(h, sl))
        if order == 0:
            out[live] = chi * e
        elif order == 1:
            dpsi = phase.eval_d1(h, sl)
            out[live] = (dchi + chi * dpsi) * e
        elif order == 2:
            dpsi = phase.eval_d1(h, sl)
            d2psi = phase.eval_d2(h, sl)
            out[live] = (d2chi + 2.0 * dchi * dpsi + chi * (d2psi + dpsi ** 2)) * e
        else:
            raise ValueError("order must be 0, 1 or 2")
        return out

    return ev


def _assemble(kind, cf, phase, cutoff, h, n, u, xi, z, x, prefactor):
    ev = _phase_evaluator(phase, cutoff, h, u, prefactor)
    return Pseudomode(
        kind=kind, h=h, n=n, u=u, xi=xi, z=z, phase=phase, cutoff=cutoff,
        x=x, f=ev(x, 0), fp=ev(x, 1), fpp=ev(x, 2),
        weights=_trapezoid_weights(x), _evaluator=ev,
    )


def _check_h(h):
    if not 0.0 < h <= 1.0:
        raise PreconditionError(f"semiclassical parameter h={h} outside (0, 1]")


def assemble_mode(cf, u, xi, h, n=1, K=DEFAULT_K, delta0=DELTA0, sharpness=1.0,
                  npts=DEFAULT_NPTS, delta=None, phase=None):
    """Interior JWKB quasimode at (u, xi) in Omega.

    Residual orders against sigma(u, xi): O(h^{n+2}) for the operator,
    O(h^{1/2}) for position/momentum localization.
    """
    _check_h(h)
    u, xi = float(u), float(xi)
    if phase is None:
        phase = transport_recursion(cf, u, xi, n, K)
    if delta is None:
        cutoff = choose_delta(phase, delta0=delta0, sharpness=sharpness)
    else:
        cutoff = CutoffSpec(delta, sharpness=sharpness)
    cf.require_inside(u - cutoff.delta, "mode support edge")
    cf.require_inside(u + cutoff.delta, "mode support edge")
    x = u + np.linspace(-cutoff.delta, cutoff.delta, npts)
    z = principal_symbol(cf, u, xi)
    return _assemble("interior", cf, phase, cutoff, h, n, u, complex(xi), z, x,
                     prefactor=h ** -0.25)


def rough_mode(cf, u, xi, h, npts=DEFAULT_NPTS, sharpness=1.0):
    """Plateau-bump wave packet at scale h^(1/2): all three residuals O(h^(1/2)).

    No bracket condition is needed; this is the construction that works at any
    point of phase space, at the price of the weakest localization rate.
    """
    _check_h(h)
    u, xi = float(u), float(xi)
    alpha = 0.5
    width = 2.0 * h ** alpha
    cf.require_inside(u - width, "packet support edge")
    cf.require_inside(u + width, "packet support edge")
    bump = CutoffSpec(2.0, sharpness=sharpness)
    scale = h ** alpha
    x = u + np.linspace(-width, width, npts)
    z = principal_symbol(cf, u, xi)

    def ev(xs, order):
        xs = np.asarray(xs, dtype=float)
        t = (xs - u) / scale
        osc = np.exp(1j * xi * xs / h) * h ** (-alpha / 2.0)
        phi = bump.chi(t)
        if order == 0:
            return phi * osc
        dphi = bump.dchi(t) / scale
        if order == 1:
            return (1j * xi / h * phi + dphi) * osc
        d2phi = bump.d2chi(t) / scale ** 2
        return (-(xi / h) ** 2 * phi + 2j * xi / h * dphi + d2phi) * osc

    return Pseudomode(
        kind="rough", h=h, n=0, u=u, xi=complex(xi), z=z, phase=None, cutoff=bump,
        x=x, f=ev(x, 0), fp=ev(x, 1), fpp=ev(x, 2),
        weights=_trapezoid_weights(x), _evaluator=ev,
    )


def gaussian_mode(cf, u, xi, h, delta=None, apply_cutoff=True, sharpness=1.0,
                  npts=DEFAULT_NPTS, K=DEFAULT_K):
    """Comparison Gaussian g = h^(-1/4) exp(h^(-1)(i xi s + k s^2/2)).

    k is the twist curvature at (u, xi); Re k < 0 is required.  By default the
    same plateau cutoff as the JWKB mode is applied, which realizes the
    quantity ||chi (e^psi - e^gauss)|| actually controlled by the O(h^(1/2))
    comparison estimate; the cutoff-free Gaussian differs by O(h^inf) mass in
    the transition band.
    """
    _check_h(h)
    u, xi = float(u), float(xi)
    k = twist_curvature(cf, u, xi)
    if k.real >= 0.0:
        raise NotInOmegaError("twist curvature has non-negative real part")
    coeffs = np.zeros(max(K, 2) + 1, dtype=complex)
    coeffs[1] = 1j * xi
    coeffs[2] = k / 2.0
    phase = PhaseSeries(u=u, xi=complex(xi), n=-1, K=max(K, 2), psi=[Series(coeffs)])
    if delta is None:
        cutoff = choose_delta(phase, sharpness=sharpness)
    else:
        cutoff = CutoffSpec(delta, sharpness=sharpness)
    if apply_cutoff:
        half = cutoff.delta
        cut = cutoff
    else:
        half = max(cutoff.delta, 10.0 * np.sqrt(h / abs(k.real)))
        cut = None
    x = u + np.linspace(-half, half, npts)
    z = principal_symbol(cf, u, xi)
    return _assemble("gaussian", cf, phase, cut, h, -1, u, complex(xi), z, x,
                     prefactor=h ** -0.25)


def gaussian_distance(mode, gmode):
    """|| f - g || over the union of the two sample grids (exact resampling)."""
    x = np.union1d(mode.x, gmode.x)
    d = mode.evaluate(x) - gmode.evaluate(x)
    w = _trapezoid_weights(x)
    return float(np.sqrt(np.sum(w * np.abs(d) ** 2)))


def laplace_constant(beta, G0, F0):
    """Leading constant of int s^(2 beta) G(s) exp(-s^2 F(s)/h) ds ~ c h^(beta+1/2).

    c = G(0) Gamma((2 beta + 1)/2) / F(0)^((2 beta + 1)/2), for the interior
    (quadratic decay) normal form.
    """
    if F0 <= 0:
        raise PreconditionError("Laplace rate F(0) must be positive")
    if beta < 0 or int(beta) != beta:
        raise PreconditionError("beta must be a non-negative integer")
    p = (2.0 * beta + 1.0) / 2.0
    return G0 * _gamma(p) / F0 ** p
