"""Exception hierarchy shared across the package.

DomainError and its children signal bad inputs (CLI maps them to exit
code 2); InternalConsistencyError signals a broken internal invariant
(exit code 1).
"""


class PrimeToolError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(PrimeToolError, ValueError):
    """An argument is outside the documented domain of an operation."""


class InvalidRangeError(DomainError):
    """A [lo, hi) integer range is malformed."""


class InsufficientPrimesError(DomainError):
    """The requested scan needs more primes than the range contains."""


class InsufficientDataError(DomainError):
    """Too few samples or blocks for the requested statistic."""


class ModelConfigError(DomainError):
    """A probabilistic-model configuration is inconsistent."""


class EmptyModelError(ModelConfigError):
    """Model parameters guarantee an empty survivor set."""


class DegeneratePredictionError(DomainError):
    """A prediction with sigma = 0 cannot be standardized."""


class CacheFormatError(PrimeToolError, ValueError):
    """A sieve cache file is corrupt or has the wrong magic."""


class InternalConsistencyError(PrimeToolError, RuntimeError):
    """An internal invariant failed; indicates a bug, not bad input."""


class ModelWarning(UserWarning):
    """Non-fatal model configuration concern (e.g. too-aggressive filter)."""
