"""Built-in operator library and the custom polynomial constructor.

Named fields:
    complex-airy     a=1, b=0,  c(u) = i u        (interior model, Omega = {xi < 0})
    davies-rotated   a=1, b=0,  c(u) = i u^2      (Omega = 2nd/4th quadrants)
    advection-exit   a=1, b=-i, c = 0 on [0, 2]   (boundary model; exit condition holds)
"""

import numpy as np

from .errors import ConfigError
from .symbol import CoefficientField, PolynomialJet


def complex_airy(domain=(-4.0, 4.0)):
    return CoefficientField(1.0, 0.0, PolynomialJet([0.0, 1j]), domain)


def davies_rotated(domain=(-4.0, 4.0)):
    return CoefficientField(1.0, 0.0, PolynomialJet([0.0, 0.0, 1j]), domain)


def advection_exit(domain=(0.0, 2.0)):
    return CoefficientField(1.0, -1j, 0.0, domain)


def polynomial_field(a_coeffs, b_coeffs, c_coeffs, domain):
    return CoefficientField(
        PolynomialJet(a_coeffs), PolynomialJet(b_coeffs), PolynomialJet(c_coeffs), domain
    )


_BUILTINS = {
    "complex-airy": complex_airy,
    "davies-rotated": davies_rotated,
    "advection-exit": advection_exit,
}


def _coerce_complex(entry):
    """JSON-friendly complex: number, [re, im], or {"re":..,"im":..}."""
    if isinstance(entry, (int, float)):
        return complex(entry)
    if isinstance(entry, (list, tuple)) and len(entry) == 2:
        return complex(float(entry[0]), float(entry[1]))
    if isinstance(entry, dict) and set(entry) <= {"re", "im"}:
        return complex(float(entry.get("re", 0.0)), float(entry.get("im", 0.0)))
    raise ConfigError(f"cannot parse complex number from {entry!r}")


def get_operator(spec, domain=None):
    """Resolve an operator spec: a built-in name or a polynomial triple.

    The dict form is {"a": [...], "b": [...], "c": [...], "domain": [lo, hi]}
    with coefficients low-to-high degree; entries may be numbers, [re, im]
    pairs, or {"re":, "im":} objects.
    """
    if isinstance(spec, str):
        if spec not in _BUILTINS:
            raise ConfigError(
                f"unknown operator {spec!r}; built-ins: {sorted(_BUILTINS)}"
            )
        return _BUILTINS[spec]() if domain is None else _BUILTINS[spec](tuple(domain))
    if isinstance(spec, dict):
        unknown = set(spec) - {"a", "b", "c", "domain"}
        if unknown:
            raise ConfigError(f"unknown operator keys: {sorted(unknown)}")
        try:
            coeffs = {
                key: np.array([_coerce_complex(e) for e in np.atleast_1d(spec.get(key, [0.0]))])
                for key in ("a", "b", "c")
            }
        except TypeError as exc:
            raise ConfigError(f"bad polynomial coefficients: {exc}") from exc
        dom = spec.get("domain", domain) or (-4.0, 4.0)
        return polynomial_field(coeffs["a"], coeffs["b"], coeffs["c"], tuple(dom))
    raise ConfigError(f"operator spec must be a name or a dict, got {type(spec)!r}")
