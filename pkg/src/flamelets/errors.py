"""Exception hierarchy shared by every module."""


class FlameletError(ValueError):
    """A domain error: inputs are well formed but violate a precondition."""


class DimensionMismatchError(FlameletError):
    pass


class UnsupportedDimensionError(FlameletError):
    pass


class GridMismatchError(FlameletError):
    pass


class NonMonotoneFiltrationError(FlameletError):
    pass


class OracleSizeError(FlameletError):
    """Raised by the brute-force oracles when the input is too large to enumerate."""


class ParseError(Exception):
    """Malformed input file. ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
