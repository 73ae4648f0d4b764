"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Raised when a measure description or CLI input cannot be parsed
    or fails validation."""


class SymbolicBaseError(ValueError):
    """Raised when an operation needs an exact (materializable) base or
    digit enumeration but the measure's base is symbolic and only
    supports log-arithmetic."""


class BudgetExceededError(RuntimeError):
    """Raised when a computation would exceed its evaluation budget."""

    def __init__(self, message: str, spent: int, limit: int):
        super().__init__(message)
        self.spent = spent
        self.limit = limit
