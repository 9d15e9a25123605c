"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input lies outside the domain where an operation converges or is defined."""


class PrecisionError(ArithmeticError):
    """Working precision was exhausted (e.g. inverting something zero to precision)."""


class UnsupportedOrder(ValueError):
    """A root of unity of the requested order does not live in the tower."""


class InsufficientLevel(ValueError):
    """A level-N residue does not determine the value being asked for."""


class VerificationFailure(AssertionError):
    """An identity check could not be resolved (e.g. no interpolation sign converges)."""
