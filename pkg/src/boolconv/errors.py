"""Exception and warning types raised across the package."""


class BoolConvError(Exception):
    """Base class for all package errors."""


class DomainError(BoolConvError, ValueError):
    """A transform was evaluated outside its domain of definition."""


class InvalidParameter(BoolConvError, ValueError):
    pass


class QuadratureFailure(BoolConvError, ArithmeticError):
    pass


class MomentError(BoolConvError, ValueError):
    """A required moment (or Boolean cumulant) is divergent or unavailable."""


class ValidityError(BoolConvError, ValueError):
    pass


class NoConvergence(BoolConvError, ArithmeticError):
    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class AtomProximity(BoolConvError, ArithmeticError):
    pass


class FitError(BoolConvError, ValueError):
    pass


class OutOfRegion(BoolConvError, ValueError):
    """No theorem covers the requested (alpha, p, part) combination."""


class NotApplicable(BoolConvError, ValueError):
    """A verification scenario cannot be instantiated for the given inputs."""


class PrecisionBudget(BoolConvError, ArithmeticError):
    pass


class ConfigError(BoolConvError, ValueError):
    pass


class CancellationWarning(UserWarning):
    """Naive Taylor subtraction lost most of its significant digits."""
