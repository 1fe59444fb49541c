"""Exception types shared across the package.

Both derive from ValueError so callers that do not care about the
distinction can catch a single class.  The CLI maps either one to the
usage/config exit code.
"""


class DomainError(ValueError):
    """A numeric argument is outside the mathematical domain of an operation."""


class UsageError(ValueError):
    """An operation was called with inconsistent or unusable configuration."""
