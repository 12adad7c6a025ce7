"""Exception types shared across the package."""


class FdhybfError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(FdhybfError, ValueError):
    """Operands have incompatible or invalid shapes."""


class ConditioningError(FdhybfError, ArithmeticError):
    """A matrix that must be positive definite is numerically singular."""


class GeometryError(FdhybfError, ValueError):
    """Physical array geometry is degenerate (non-positive element distance)."""


class PencilSizeError(FdhybfError, ValueError):
    """A vectorized analog eigenproblem would exceed the configured size cap."""


class DivergenceError(FdhybfError, RuntimeError):
    """An iterative search failed to bracket or converge."""


class ConfigError(FdhybfError, ValueError):
    """Configuration parsing or validation failure."""

    def __init__(self, message, violations=None):
        super().__init__(message)
        self.violations = list(violations or [])
