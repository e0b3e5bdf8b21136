"""Exception types shared across the package."""


class InvalidArgumentError(ValueError):
    """An argument violates a documented precondition."""


class CapacityError(ValueError):
    """A register would exceed the configured qubit cap."""


class NotClassicalError(InvalidArgumentError):
    """A circuit contains ops with no classical bit-level meaning."""
