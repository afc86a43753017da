"""Exception hierarchy shared by all numerical modules."""


class CasimirError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 1


class InvalidConfigurationError(CasimirError, ValueError):
    exit_code = 2


class QuadratureError(CasimirError, ArithmeticError):
    """Adaptive quadrature did not reach its tolerance.

    ``piece`` identifies the worst interval or contour segment.
    """

    exit_code = 3

    def __init__(self, message, piece=None, estimate=None, error=None):
        super().__init__(message)
        self.piece = piece
        self.estimate = estimate
        self.error = error


class SingularEvaluationError(CasimirError, ZeroDivisionError):
    """A closed-form expression was evaluated on one of its singularities."""

    exit_code = 4

    def __init__(self, message, location=None, index=None):
        super().__init__(message)
        self.location = location
        self.index = index


class IllConditionedContourError(CasimirError, ArithmeticError):
    exit_code = 5

    def __init__(self, message, raw=None):
        super().__init__(message)
        self.raw = raw


class WindowViolationError(CasimirError, ArithmeticError):
    """A tracked singularity left the window it was being followed in."""

    exit_code = 3


class MissingSingularityError(QuadratureError):
    """A principal-value integrand diverges somewhere no marker was declared."""

    def __init__(self, message, location=None, piece=None, estimate=None, error=None):
        super().__init__(message, piece=piece, estimate=estimate, error=error)
        self.location = location
