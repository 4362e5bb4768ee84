"""Error taxonomy shared by all modules.

Every mathematically meaningful failure gets its own exception type so callers
(and the command line driver) can distinguish "your input violates a
precondition" from "the numerics did not converge".
"""


class PseudomodeError(Exception):
    """Base class for all library errors."""


class PreconditionError(PseudomodeError):
    """A mathematical precondition of an operation is violated."""


class DomainError(PreconditionError):
    """A point lies outside the coefficient domain."""


class EllipticityError(PreconditionError):
    """The leading coefficient a(x) vanishes somewhere on the probe grid."""


class SingularPointError(PreconditionError):
    """d(sigma)/d(xi) = 0 at the requested phase-space point."""


class BranchPointError(PreconditionError):
    """The eikonal radicand vanishes at the expansion point; no branch can be pinned."""


class NotInOmegaError(PreconditionError):
    """The phase-space point is not in the bracket-positive region."""


class DegenerateRootError(PreconditionError):
    """The boundary quadratic has a double root (z at the parabola vertex)."""


class TruncationError(PseudomodeError):
    """The series truncation degree is too small for the requested accuracy."""


class ConvergenceError(PseudomodeError):
    """An iterative numerical routine failed to converge."""


class BoundViolationError(PseudomodeError):
    """A proved inequality fails numerically beyond its slack."""


class ConfigError(PseudomodeError):
    """Invalid configuration input (unknown key, out-of-range numeric)."""
