"""Exception types shared across the package."""


class InvalidArgumentError(ValueError):
    pass


class ProtocolError(RuntimeError):
    """Raised when a learner or queue is driven out of its round order."""


class ConfigError(ValueError):
    pass


class NumericError(ArithmeticError):
    pass
