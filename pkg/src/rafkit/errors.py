"""Exception types shared across the package."""


class RafkitError(Exception):
    """Base class for all rafkit-specific errors."""


class ParseError(RafkitError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, col {column}: {message}"
        super().__init__(message)


class ValidationError(RafkitError):
    """An instance violates a structural invariant."""


class CapExceeded(RafkitError):
    """A brute-force operation would exceed its configured cap."""

    def __init__(self, what, size, cap):
        self.what = what
        self.size = size
        self.cap = cap
        super().__init__(f"{what}: size {size} exceeds cap {cap}")


class InputShapeError(RafkitError):
    """An input formula/program does not match the required shape."""
