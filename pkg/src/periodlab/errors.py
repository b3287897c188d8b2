"""Exception taxonomy shared across the package."""


class PeriodLabError(Exception):
    """Base class for all errors raised by this package."""


class BranchCut(PeriodLabError):
    """Argument lies on the branch cut (-oo, 0] of the principal logarithm."""


class Pole(PeriodLabError):
    """Evaluation at a pole of the requested function."""


class PoleAtOne(Pole):
    """Hurwitz zeta evaluated at its simple pole a = 1."""


class ConvergenceFailure(PeriodLabError):
    """An iterative or quadrature scheme failed to reach the target accuracy."""


class SlowConvergence(PeriodLabError):
    """A series is formally convergent but its tail bound exceeds the tolerance."""


class DomainError(PeriodLabError):
    """Input lies outside the evaluable domain of an operation."""


class HalfIntegerNu(PeriodLabError):
    """Spectral parameter at nu in 1/2 + Z, where the inverse transform degenerates."""


class ResonantNu(PeriodLabError):
    """Spectral parameter resonates (m + 2 nu = 0 for some required integer m)."""


class RelationViolation(PeriodLabError):
    """Supplied data violates a required group relation."""


class DimensionMismatch(PeriodLabError):
    """Matrix or vector dimensions are inconsistent."""


class SizeLimit(PeriodLabError):
    """Requested enumeration exceeds the hard size guard."""
