"""Exception hierarchy shared across the package."""


class KoopmanError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(KoopmanError, ValueError):
    """An argument violates a documented precondition (shape, range, finiteness)."""


class EvaluationError(KoopmanError):
    """An observable produced a non-finite value; the message names the member."""


class ConditioningError(KoopmanError):
    """A matrix factorization or solve failed due to (near-)singularity."""


class DivergenceError(KoopmanError):
    """A simulated trajectory left the finite domain; carries the step index."""

    def __init__(self, message: str, step: int):
        super().__init__(message)
        self.step = step


class ConfigurationError(KoopmanError):
    """An experiment configuration is inconsistent or cannot be executed."""
