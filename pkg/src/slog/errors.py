"""Error types shared across the package."""


class SlogError(Exception):
    """Base for all user-facing errors; message is printed after ***ERROR***:."""


class SlogSyntaxError(SlogError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        super().__init__(f"syntax error at line {line}, column {col}: {message}")


class SlogTypeError(SlogError):
    """Type checker rejection; message already starts with 'type error'."""


class UnknownClauseError(SlogError):
    pass


class ResourceLimitError(SlogError):
    """Depth/time budget exceeded; distinct from plain failure."""
