"""Exception types shared across the package."""


class UsageError(ValueError):
    """Caller violated a precondition (bad shapes, mismatched contexts, ...)."""


class DomainError(ValueError):
    """Input is outside the mathematical domain of the operation."""


class UnsupportedParametersError(UsageError):
    """The operation is only implemented for a restricted parameter family."""
