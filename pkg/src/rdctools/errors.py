"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the function."""


class InfeasibleError(ValueError):
    """No finite rate meets the requested budgets.

    Attributes:
        floor: smallest budget value that would be feasible (the distortion
            floor for Gaussian problems, the semantic-distance floor for binary).
    """

    def __init__(self, message, floor):
        super().__init__(message)
        self.floor = floor


class InvalidChannelError(ValueError):
    """Test-channel parameters violate a correlation or probability bound."""


class ConfigError(ValueError):
    """A sweep configuration is malformed."""
