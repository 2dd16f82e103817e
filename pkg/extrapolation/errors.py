"""Exception types raised across the package.

Each one also derives from the builtin a caller would naturally catch, so
``except ValueError`` keeps working around precondition failures.
"""


class ExtrapolationError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatchError(ExtrapolationError, ValueError):
    pass


class DomainError(ExtrapolationError, ValueError):
    pass


class RankDeficiencyError(ExtrapolationError, ValueError):
    """A family is (numerically) linearly dependent on a domain."""


class NonFiniteError(ExtrapolationError, FloatingPointError):
    pass


class DivergenceError(ExtrapolationError, RuntimeError):
    pass


class BoundViolationError(ExtrapolationError, AssertionError):
    pass


class ConfigError(ExtrapolationError, KeyError):
    """A run config is missing a key or carries a bad one."""

    def __init__(self, key, message):
        super().__init__(key)
        self.key = key
        self.message = message

    def __str__(self):
        return f"config key '{self.key}': {self.message}"
