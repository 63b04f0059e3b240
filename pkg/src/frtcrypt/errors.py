"""Exception hierarchy shared by all frtcrypt modules."""


class FrtError(Exception):
    """Base class for every error raised by frtcrypt."""


class InvalidOrderError(FrtError, ValueError):
    pass


class InvalidSizeError(FrtError, ValueError):
    pass


class DimensionError(FrtError, ValueError):
    pass


class OddDimensionError(DimensionError):
    pass


class ParameterError(FrtError, ValueError):
    """A chaos-map or key parameter lies outside its admissible range."""


class FlatSequenceError(FrtError, ArithmeticError):
    """A generated chaotic block is constant and cannot be min-max normalized."""


class FormatError(FrtError, ValueError):
    """Malformed container, image, or key file."""


class KeyFileError(FormatError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
