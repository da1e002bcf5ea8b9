"""Shared exception types.

Everything derives from ValueError so callers that only care about "bad
input" can catch one thing; the CLI maps these to exit code 2.
"""


class TrihiveError(ValueError):
    """Base class for domain errors raised by this package."""


class SizeMismatchError(TrihiveError):
    """Two objects that must share a grid size do not."""


class PreconditionError(TrihiveError):
    """An operation's documented precondition was violated."""


class DegenerateDirectionError(TrihiveError):
    """A direction vector required to be nonzero is (numerically) zero."""


class NoModeError(TrihiveError):
    """A constant field has no nonzero character mode."""


class InvalidBoundaryError(TrihiveError):
    """Hive boundary data violates its invariants."""


class SizeGuardError(TrihiveError):
    """An exact-enumeration guard was exceeded."""
