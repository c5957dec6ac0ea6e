"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """An argument violates a documented precondition (bad range, bad format,
    mismatched alphabet, exceeded enumeration budget)."""


class UnreachablePatternError(ValueError):
    """The pattern uses a face of probability zero, so it almost surely never
    occurs and its waiting time is infinite."""
