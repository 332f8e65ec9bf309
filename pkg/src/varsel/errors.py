"""Exception types raised across the package.

Every error here subclasses ``ValueError`` so callers that only care about
"bad input" can catch that, while the CLI maps each subclass to its own
exit code.
"""


class VarselError(ValueError):
    """Base class for input and configuration errors."""


class ColumnError(VarselError):
    """A named column is unknown, duplicated, or malformed."""

    def __init__(self, message, column=None):
        super().__init__(message)
        self.column = column


class ZeroVarianceError(VarselError):
    """A column has zero variance and cannot be standardized."""

    def __init__(self, column):
        super().__init__(f"column {column!r} has zero variance")
        self.column = column


class ConfigError(VarselError):
    """An experiment or algorithm configuration violates its constraints."""
