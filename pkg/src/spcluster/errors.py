"""Exception hierarchy shared by all modules.

Two base classes split the failure modes the command line cares about:
``ValidationError`` for violated preconditions or inadmissible parameters
(exit code 2) and ``ConvergenceError`` for numerical failures (exit code 3).
"""


class SPClusterError(Exception):
    """Base class for all library errors."""


class ValidationError(SPClusterError):
    """A precondition or admissibility condition is violated."""

    exit_code = 2


class ConvergenceError(SPClusterError):
    """A numerical procedure failed to converge or resolve."""

    exit_code = 3


# ground state -----------------------------------------------------------

class Supercritical(ValidationError):
    """Exponent p is at or above the critical value (N+2)/(N-2)."""


class NoBracket(ConvergenceError):
    """The center-value scan found no overshoot/undershoot bracket."""


class TailNotResolved(ConvergenceError):
    """The profile does not decay far enough to identify its tail."""


class TailUnderresolved(ConvergenceError):
    """An exponentially weighted integrand is still large at R_max."""


# potentials -------------------------------------------------------------

class NotIntegrable(ConvergenceError):
    """A kernel quadrature failed to converge (density too heavy-tailed)."""


class QuadratureNotConverged(ConvergenceError):
    """Panel refinement hit its depth limit before the tolerance."""


# configurations ---------------------------------------------------------

class TooFewVertices(ValidationError):
    """Polygon with k <= 6: the side is not shorter than the radius."""


class ConditionViolated(ValidationError):
    """A family admissibility inequality fails for these parameters."""


class UnknownPolytope(ValidationError):
    """Polytope name outside the built-in catalog."""


class DegenerateFamily(ValidationError):
    """Family parameters give no dominant same-sign pair."""


class EmptyRange(ValidationError):
    """The admissible radius interval is empty (epsilon too large)."""


# reduced energy ---------------------------------------------------------

class DomainViolation(ValidationError):
    """Argument below the lower endpoint of the model function's domain."""


class NoInteriorMax(ConvergenceError):
    """The slope scan found zero or multiple sign changes."""


class BoundaryMax(ConvergenceError):
    """The maximizer sits on the boundary of the admissible range."""


class UnknownFamily(ValidationError):
    """Operation requires a cataloged family, got a raw point cloud."""
