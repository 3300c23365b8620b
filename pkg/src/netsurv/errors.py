"""Exception hierarchy shared across the package."""


class NetsurvError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(NetsurvError, ValueError):
    """Invalid argument value or violated type invariant."""


class DataFormatError(NetsurvError, ValueError):
    """Malformed input file (bad header, bad row, duplicate key)."""


class SingularEvaluationError(NetsurvError, ArithmeticError):
    """Hazard evaluation is infinite at the requested time.

    Raised for a Weibull hazard with shape < 1 evaluated at exactly t = 0.
    The cumulative hazard stays finite there, so survival-based quantities
    remain available for such parameterizations.
    """


class UndefinedRatioError(NetsurvError, ZeroDivisionError):
    """A ratio estimand has a zero denominator.

    Relative risk without background mortality, standardized mortality
    ratio with zero expected deaths.
    """


class CoverageError(NetsurvError, LookupError):
    """A life-table lookup fell outside the table's coverage."""

    def __init__(self, message: str, key=None):
        super().__init__(message)
        self.key = key


class MissingLabelError(ValidationError):
    """Cohort lacks the cause labels the requested estimator needs."""
