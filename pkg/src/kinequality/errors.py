"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Input data or parameters violate a precondition."""


class EmptySampleError(ValidationError):
    pass


class NegativeValueError(ValidationError):
    pass


class ZeroTotalError(ValidationError):
    pass


class DatasetFormatError(ValidationError):
    """A data file line could not be parsed."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NumericError(ArithmeticError):
    """A numerical routine failed to reach its tolerance."""
