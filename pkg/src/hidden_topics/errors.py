"""Exception hierarchy shared across the package."""
from __future__ import annotations


class HiddenTopicsError(Exception):
    """Base class for all errors raised by this package."""


class EmbeddingFormatError(HiddenTopicsError, ValueError):
    """A word-vector file could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyFileError(EmbeddingFormatError):
    pass


class HeaderError(EmbeddingFormatError):
    pass


class ComponentCountError(EmbeddingFormatError):
    pass


class NonFiniteValueError(EmbeddingFormatError):
    pass


class EntryCountError(EmbeddingFormatError):
    pass


class EmptyContentError(HiddenTopicsError, ValueError):
    """Text produced no in-vocabulary content words."""

    def __init__(self, message: str, side: str | None = None):
        self.side = side
        super().__init__(message)


class DimensionMismatchError(HiddenTopicsError, ValueError):
    pass


class ConvergenceError(HiddenTopicsError, ArithmeticError):
    """An iterative solver failed to converge or failed its post-check."""


class DatasetError(HiddenTopicsError, ValueError):
    """A JSON-lines dataset file is malformed."""

    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        self.line = line
        self.path = path
        prefix = ""
        if path is not None:
            prefix += f"{path}:"
        if line is not None:
            prefix += f"{line}:"
        super().__init__(f"{prefix} {message}" if prefix else message)


class DanglingReferenceError(DatasetError):
    pass


class DegenerateLabelsError(HiddenTopicsError, ValueError):
    """Labels (or a tuning split) contain only one class."""
