"""Shared error types."""


class InstanceTooLarge(RuntimeError):
    """An exact oracle was asked to enumerate beyond its configured limits."""


class SearchBudgetExceeded(RuntimeError):
    """A bounded exhaustive search hit its node cap before concluding."""


class PreconditionError(ValueError):
    """A documented operation precondition does not hold for the inputs."""
