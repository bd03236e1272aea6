"""Exception types raised by the simulator."""


class InvalidArgumentError(ValueError):
    """An argument violates a documented precondition."""


class NumericalFailureError(ArithmeticError):
    """A numerical routine could not produce a valid result."""


class ConfigParseError(ValueError):
    """Malformed configuration text."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ConfigValidationError(ValueError):
    """A configuration value is out of range or missing."""

    def __init__(self, key, message):
        self.key = key
        super().__init__(f"{key}: {message}")
