"""Exception types raised across the package."""


class MulticurveError(Exception):
    """Base class for all package errors."""


class NotInLocalRing(MulticurveError, ArithmeticError):
    """A fraction whose reduced denominator vanishes at the origin."""


class EmptyType(MulticurveError, ValueError):
    pass


class ResolutionBudgetExceeded(MulticurveError, RuntimeError):
    pass


class AmbientTooSmall(MulticurveError, ValueError):
    pass


class RankTooSmall(MulticurveError, ValueError):
    pass


class IndexOutOfRange(MulticurveError, IndexError):
    pass


class NotMonotone(MulticurveError, ValueError):
    pass


class ZeroRank(MulticurveError, ZeroDivisionError):
    pass


class NotRigid(MulticurveError, ValueError):
    """Raised when a complete type does not follow the rigid pattern.

    ``index`` is the first graded level at which the pattern breaks.
    """

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class ConfigError(MulticurveError, ValueError):
    pass
