"""Exception types shared across the package."""


class InvalidArgument(ValueError):
    pass


class EmptySetError(ValueError):
    """An operation needs at least one active link."""


class SizeCapError(RuntimeError):
    """Input is larger than an exact solver or enumeration is allowed to handle."""


class NoConvergence(RuntimeError):
    pass


class RegimeError(ValueError):
    """Parameters fall outside the regime where a construction has a solution."""


class ConfigError(ValueError):
    """Invalid experiment configuration; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
