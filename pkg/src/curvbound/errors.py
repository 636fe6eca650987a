"""Exception hierarchy shared by all modules."""


class CurvBoundError(Exception):
    """Base class for every error raised by this package."""


class DomainError(CurvBoundError, ValueError):
    """An argument lies outside the domain of the operation."""


class InconsistencyError(CurvBoundError, ArithmeticError):
    """Input data contradict each other beyond the rounding tolerance."""


class AmbiguityError(CurvBoundError, ValueError):
    """The requested object is not uniquely determined (e.g. antipodal points)."""


class EstimationError(CurvBoundError, RuntimeError):
    """A numerical estimator could not bracket its answer."""


class PreconditionError(CurvBoundError, ValueError):
    """A documented precondition of an operation does not hold."""
