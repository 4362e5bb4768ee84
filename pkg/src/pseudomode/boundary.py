"""Boundary-layer quasimodes on [0, gamma] for operators with an exit endpoint.

At an exit endpoint (Im(-b(0)/a(0)) > 0) the operator carries a band of
admissible complex covectors

    band = { xi : 0 < Im(xi) < Im(-b(0)/a(0)) },

and sigma(0, band) fills the region inside the parabola {sigma(0, t): t real}.
Each xi in the band supports a one-sided quasimode

    f(s) = h^(-1/2) chi(s) exp(psi(s)),   s in [0, delta],

built by the same eikonal/transport recursion as the interior construction,
anchored at u = 0 with complex xi; the decay is now linear-rate,
|e^psi|^2 ~ exp(-s F(s)/h) with F(0) = 2 Im(xi), so norms follow the
one-sided Laplace law c h^(m+1) rather than the interior h^(m+1/2) law.

For a point z strictly inside the parabola the two covector roots of
sigma(0, xi) = z give two such modes, and the combination

    f = beta_2 f_1 - beta_1 f_2,   beta_r = u h f_r'(0) + w f_r(0),

satisfies the Robin condition u h f'(0) + w f(0) = 0 at machine precision
while keeping the O(h^(n+2)) operator residual.
"""

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma as _gamma

from .cutoff import CutoffSpec
from .errors import (
    DegenerateRootError,
    PreconditionError,
)
from .symbol import principal_symbol
from .wkb import (
    DEFAULT_K,
    DEFAULT_NPTS,
    DELTA0,
    PhaseSeries,
    Pseudomode,
    _assemble,
    _check_h,
    _phase_core,
    _trapezoid_weights,
    choose_delta,
)

__all__ = [
    "BoundaryCovector",
    "RobinCondition",
    "exit_condition",
    "boundary_band",
    "quadratic_roots",
    "inside_parabola",
    "boundary_phase",
    "boundary_mode",
    "laplace_constant_boundary",
    "robin_combination",
    "robin_residual",
]


@dataclass(frozen=True)
class BoundaryCovector:
    """Complex covector admissible at the exit endpoint: Im(xi) > 0."""

    xi: complex

    def __post_init__(self):
        object.__setattr__(self, "xi", complex(self.xi))
        if not self.xi.imag > 0.0:
            raise PreconditionError(
                f"boundary covector must have Im(xi) > 0, got {self.xi}"
            )


@dataclass(frozen=True)
class RobinCondition:
    """Boundary condition coef_deriv * h f'(0) + coef_value * f(0) = 0."""

    coef_deriv: complex
    coef_value: complex

    def __post_init__(self):
        object.__setattr__(self, "coef_deriv", complex(self.coef_deriv))
        object.__setattr__(self, "coef_value", complex(self.coef_value))
        if self.coef_deriv == 0 and self.coef_value == 0:
            raise PreconditionError("Robin coefficients must not both vanish")


def _xi_of(xi):
    return xi.xi if isinstance(xi, BoundaryCovector) else complex(xi)


def exit_condition(cf):
    """True when Im(-b(0)/a(0)) > 0, i.e. 0 is an exit endpoint."""
    a0 = complex(cf.a.values(np.array(0.0)))
    b0 = complex(cf.b.values(np.array(0.0)))
    return float(np.imag(-b0 / a0)) > 0.0


def boundary_band(cf):
    """Height H of the admissible band {0 < Im(xi) < H} at the endpoint."""
    a0 = complex(cf.a.values(np.array(0.0)))
    b0 = complex(cf.b.values(np.array(0.0)))
    height = float(np.imag(-b0 / a0))
    if height <= 0.0:
        raise PreconditionError("exit condition fails: Im(-b(0)/a(0)) <= 0")
    return height


def _vertex_value(cf):
    a0 = complex(cf.a.values(np.array(0.0)))
    b0 = complex(cf.b.values(np.array(0.0)))
    c0 = complex(cf.c.values(np.array(0.0)))
    return c0 - b0 ** 2 / (4.0 * a0)


def quadratic_roots(cf, z, rtol=1e-12):
    """The two roots of a(0) xi^2 + b(0) xi + c(0) = z, ordered by (Im, Re).

    The roots coincide exactly when z equals the vertex value
    c(0) - b(0)^2 / 4a(0); that input raises DegenerateRootError.
    """
    a0 = complex(cf.a.values(np.array(0.0)))
    b0 = complex(cf.b.values(np.array(0.0)))
    c0 = complex(cf.c.values(np.array(0.0)))
    z = complex(z)
    scale = max(abs(z), abs(_vertex_value(cf)), 1.0)
    if abs(z - _vertex_value(cf)) <= rtol * scale:
        raise DegenerateRootError(
            f"z={z} is the parabola vertex c(0)-b(0)^2/4a(0); roots coincide"
        )
    disc = np.sqrt(complex(b0 ** 2 - 4.0 * a0 * (c0 - z)))
    r1 = (-b0 + disc) / (2.0 * a0)
    r2 = (-b0 - disc) / (2.0 * a0)
    roots = sorted((r1, r2), key=lambda w: (w.imag, w.real))
    for r in roots:
        check = a0 * r ** 2 + b0 * r + c0
        if abs(check - z) > 1e-10 * max(abs(z), 1.0):
            raise DegenerateRootError(f"root verification failed at xi={r}")
    return roots[0], roots[1]


def inside_parabola(cf, z):
    """True iff z lies strictly inside {sigma(0, t): t real}.

    Equivalent to both covector roots of sigma(0, xi) = z lying strictly in
    the admissible band.  The vertex value is the degenerate interior limit
    point: it returns True with a warning rather than raising.
    """
    height = boundary_band(cf)  # also enforces the exit condition
    try:
        roots = quadratic_roots(cf, z)
    except DegenerateRootError:
        warnings.warn(
            "z equals the parabola vertex; treating as (degenerate) interior",
            RuntimeWarning,
            stacklevel=2,
        )
        return True
    return all(0.0 < r.imag < height for r in roots)


def boundary_phase(cf, xi, n=1, K=DEFAULT_K):
    """One-sided phase series [psi_{-1}, ..., psi_n] anchored at the endpoint.

    Same recursion as the interior construction with u = 0 and complex xi;
    psi_{-1}(s) = i xi s + k s^2/2 + O(s^3).  Raises BranchPointError when
    w(xi, 0) = 0 (that xi is the branch point of the covector square root:
    for constant coefficients, exactly the vertex covector -b/2a).
    """
    xi = _xi_of(xi)
    if not xi.imag > 0.0:
        raise PreconditionError(f"boundary covector must have Im(xi) > 0, got {xi}")
    cf.require_inside(0.0, "endpoint anchor")
    pad = K + 2 * (max(n, 0) + 2)
    psis, _ = _phase_core(*cf.jets(0.0, pad), xi, n, K)
    return PhaseSeries(u=0.0, xi=xi, n=n, K=K, psi=psis, one_sided=True)


def boundary_mode(cf, xi, h, n=1, K=DEFAULT_K, delta0=DELTA0, sharpness=1.0,
                  npts=DEFAULT_NPTS, delta=None, phase=None):
    """Boundary quasimode f(s) = h^(-1/2) chi(s) e^(psi(s)) on [0, delta].

    f(0) = h^(-1/2) exactly (chi(0) = 1, psi(0) = 0).  Residual orders
    against sigma(0, xi): O(h^(n+2)) for the operator, O(h) for both
    localization norms (linear-rate Laplace asymptotics).
    """
    _check_h(h)
    xi = _xi_of(xi)
    if phase is None:
        phase = boundary_phase(cf, xi, n=n, K=K)
    if delta is None:
        cutoff = choose_delta(phase, delta0=delta0, sharpness=sharpness)
    else:
        cutoff = CutoffSpec(delta, sharpness=sharpness, one_sided=True)
    cf.require_inside(cutoff.delta, "mode support edge")
    x = np.linspace(0.0, cutoff.delta, npts)
    z = principal_symbol(cf, 0.0, xi)
    return _assemble("boundary", cf, phase, cutoff, h, n, 0.0, xi, z, x,
                     prefactor=h ** -0.5)


def laplace_constant_boundary(m, G0, F0):
    """Leading constant of int_0^delta s^m G(s) exp(-s F(s)/h) ds ~ c h^(m+1).

    c = G(0) Gamma(m+1) / F(0)^(m+1) for even non-negative integer m (the
    one-sided, linear-decay-rate law).
    """
    if F0 <= 0:
        raise PreconditionError("Laplace rate F(0) must be positive")
    if m < 0 or int(m) != m or int(m) % 2 != 0:
        raise PreconditionError("m must be a non-negative even integer")
    return G0 * _gamma(m + 1.0) / F0 ** (m + 1.0)


def robin_residual(mode, rc):
    """Normalized boundary residual |u h f'(0) + w f(0)| / (h^(-1/2)(|u|+|w|))."""
    bc = rc.coef_deriv * mode.h * mode.fp[0] + rc.coef_value * mode.f[0]
    scale = mode.h ** -0.5 * (abs(rc.coef_deriv) + abs(rc.coef_value))
    return abs(bc) / scale


def robin_combination(cf, rc, z, h, n=1, K=DEFAULT_K, delta0=DELTA0,
                      sharpness=1.0, npts=DEFAULT_NPTS):
    """Robin-exact combination f = beta_2 f_1 - beta_1 f_2 of the two root modes.

    beta_r = coef_deriv * h f_r'(0) + coef_value * f_r(0) are taken from the
    actual numeric traces, so the boundary condition holds to rounding (the
    classical coefficients i*u*xi_r + w are their h -> 0 limits).  Both modes
    share one cutoff width and sample grid.  The result has xi = None (no
    single covector) and keeps the O(h^(n+2)) operator residual against z.
    """
    _check_h(h)
    if not exit_condition(cf):
        raise PreconditionError("exit condition fails at the endpoint")
    z = complex(z)
    if not inside_parabola(cf, z):
        raise PreconditionError(f"z={z} is not strictly inside the parabola")
    xi1, xi2 = quadratic_roots(cf, z)
    ph1 = boundary_phase(cf, xi1, n=n, K=K)
    ph2 = boundary_phase(cf, xi2, n=n, K=K)
    cut1 = choose_delta(ph1, delta0=delta0, sharpness=sharpness)
    cut2 = choose_delta(ph2, delta0=delta0, sharpness=sharpness)
    delta = min(cut1.delta, cut2.delta)
    f1 = boundary_mode(cf, xi1, h, n=n, K=K, sharpness=sharpness, npts=npts,
                       delta=delta, phase=ph1)
    f2 = boundary_mode(cf, xi2, h, n=n, K=K, sharpness=sharpness, npts=npts,
                       delta=delta, phase=ph2)
    beta1 = rc.coef_deriv * h * f1.fp[0] + rc.coef_value * f1.f[0]
    beta2 = rc.coef_deriv * h * f2.fp[0] + rc.coef_value * f2.f[0]
    scale = max(abs(beta1), abs(beta2))
    if scale <= 1e-13 * h ** -0.5 * (abs(rc.coef_deriv) + abs(rc.coef_value)):
        raise DegenerateRootError(
            "both root modes satisfy the boundary condition; combination degenerate"
        )
    # Combine first, rescale after: the rescale multiplies f, f', f'' by one
    # common real factor and therefore preserves the exact beta cancellation
    # in the boundary trace.
    s = 1.0 / scale
    ev1, ev2 = f1._evaluator, f2._evaluator

    def ev(x, order=0):
        return s * (beta2 * ev1(x, order) - beta1 * ev2(x, order))

    x = f1.x
    return Pseudomode(
        kind="boundary", h=h, n=n, u=0.0, xi=None, z=z,
        phase=(ph1, ph2), cutoff=f1.cutoff,
        x=x,
        f=s * (beta2 * f1.f - beta1 * f2.f),
        fp=s * (beta2 * f1.fp - beta1 * f2.fp),
        fpp=s * (beta2 * f1.fpp - beta1 * f2.fpp),
        weights=_trapezoid_weights(x),
        _evaluator=ev,
    )
