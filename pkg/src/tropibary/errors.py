"""Exception hierarchy shared by the library and the CLI."""

from __future__ import annotations


class TropibaryError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(TropibaryError, ValueError):
    """An object violates one of its invariants or an operation precondition."""

    def __init__(self, message: str, *, name: str | None = None) -> None:
        self.name = name
        self.message = message
        super().__init__(f"{name}: {message}" if name else message)


class DimensionError(ValidationError):
    """Vectors or spaces of incompatible shape were combined."""


class SpaceMismatchError(ValidationError):
    """Measures or functions live on different ground spaces."""


class DocumentError(TropibaryError):
    """A document could not be parsed."""

    def __init__(self, message: str, *, line: int | None = None, column: int | None = None) -> None:
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
