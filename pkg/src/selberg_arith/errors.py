"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class ResourceLimitError(RuntimeError):
    """A brute-force computation would exceed its configured exhaustion bound."""


class InconsistencyError(AssertionError):
    """An internal invariant failed; indicates a bug, never bad input."""


class CacheCorruptError(RuntimeError):
    """The on-disk discriminant table failed validation."""
