"""Exception hierarchy shared across the package."""


class MgpError(Exception):
    """Base class for all package errors."""


class ValidationError(MgpError, ValueError):
    """The model inputs violate a structural constraint."""


class RowSumError(ValidationError):
    pass


class EmptyColumnError(ValidationError):
    pass


class BadAlpha(ValidationError):
    pass


class BadVariogram(ValidationError):
    pass


class BadMass(ValidationError):
    pass


class NotPositiveDefinite(MgpError, ValueError):
    pass


class ToleranceNotReached(MgpError, RuntimeError):
    """QMC budget exhausted before the requested standard error."""


class NegativeInput(MgpError, ValueError):
    pass


class QuadratureFailure(MgpError, RuntimeError):
    pass


class RejectionBudgetExceeded(MgpError, RuntimeError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index
