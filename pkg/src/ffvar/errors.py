"""Exception types shared across the package.

The CLI maps these onto exit codes: ValidationError -> 2,
CapExceededError -> 3, InternalCheckError -> 4.
"""


class FFVarError(Exception):
    """Base class for all package errors."""


class ValidationError(FFVarError):
    """Invalid arguments or violated preconditions."""


class CapExceededError(FFVarError):
    """A configured resource cap would be exceeded."""


class InternalCheckError(FFVarError):
    """An internal consistency check failed (signals a bug upstream)."""
