"""Exception types shared across the package."""


class GreError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArgument(GreError, ValueError):
    pass


class OutOfRange(GreError, IndexError):
    """An argument falls outside a precomputed table."""


class ResourceError(GreError):
    """A bounded search or an allocation ran out of room."""


class NumericalConsistencyError(GreError, ArithmeticError):
    """A floating-point evaluation drifted too far from its exact value."""


class InvariantViolation(GreError, AssertionError):
    """An internal invariant that must never fail did fail."""


class EvaluationError(GreError):
    """Evaluating a user-supplied arithmetic function raised."""

    def __init__(self, argument, cause):
        super().__init__(f"evaluation failed at argument {argument}: {cause!r}")
        self.argument = argument
        self.cause = cause


class VerificationFailure(GreError):
    """A mechanical check of an identity or bound did not hold."""

    def __init__(self, message, argument=None):
        super().__init__(message)
        self.argument = argument
