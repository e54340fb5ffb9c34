"""Error types shared across the package.

Argument and precondition problems raise plain ValueError.  The two classes
below mark failures that callers may want to handle separately: a code that
cannot be built as requested, and a numeric kernel producing inconsistent
values.
"""

__all__ = ["ConstructionError", "NumericError"]


class ConstructionError(Exception):
    """A code with the requested parameters cannot be constructed."""


class NumericError(Exception):
    """A numeric routine produced values that fail an internal consistency check."""
