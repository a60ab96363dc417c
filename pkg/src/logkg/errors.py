"""Exception hierarchy.

Two families matter to callers: ValidationError for inputs that violate a
documented precondition (CLI exit code 2), NumericalError for solver or
discretization failures on admissible inputs (CLI exit code 3).
"""


class LogKGError(Exception):
    """Base class for all package errors."""


class ValidationError(LogKGError):
    """An input violates a documented precondition."""


class NumericalError(LogKGError):
    """A solver failed on otherwise admissible input."""


class AmplitudeOutOfRange(ValidationError):
    """Requested amplitude lies outside the open periodic-orbit window."""


class PeriodOutOfRange(ValidationError):
    """Requested period lies at or below the small-oscillation limit."""


class DomainTooSmall(ValidationError):
    """Grid too short for the solitary-wave tail to be negligible."""


class WindowViolation(ValidationError):
    """Evaluation time outside the causal window of the periodic
    d'Alembert representation."""


class BranchTooShort(ValidationError):
    """Branch has too few points for the requested finite-difference stencil."""


class PoleAtOne(ValidationError):
    """Eigenvalue map evaluated at its pole."""


class IntegrationFailure(NumericalError):
    """ODE event was not bracketed within the safety horizon."""


class RootBracketFailure(NumericalError):
    """Bracketed root-finding failed (degenerate level set)."""


class NoConvergence(NumericalError):
    """Iteration did not converge to tolerance."""


class ConvergenceFailure(NumericalError):
    """Dense eigensolver failed to converge."""


class DegenerateTurningPoint(NumericalError):
    """phi''(0) vanishes; the normalized second Floquet solution is undefined."""


class AmbiguousZero(NumericalError):
    """An eigenvalue fell inside the guard band around the zero tolerance."""


class ConstraintDegenerate(NumericalError):
    """Constraint vectors are numerically collinear."""


class SingularSystem(NumericalError):
    """Deflated linear system is still numerically singular."""


class NonFinite(NumericalError):
    """A field state developed NaN or Inf entries."""


class InertialIndexMismatch(NumericalError):
    """Computed inertial index contradicts the Floquet-constant prediction."""
