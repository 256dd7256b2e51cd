"""Exception types shared across the analysis pipeline."""

from __future__ import annotations


class PrivsliceError(Exception):
    """Base class for all errors raised by this package."""


class SlirParseError(PrivsliceError):
    """Raised for any non-conforming SLIR document.

    Covers lexical/syntax errors as well as structural validation
    failures (undefined or duplicate labels, duplicate class/method
    names, use of an undefined local). Always carries a location.
    """

    def __init__(self, message: str, line: int, col: int, expected: tuple[str, ...] = ()):
        self.message = message
        self.line = line
        self.col = col
        self.expected = expected
        suffix = ""
        if expected:
            suffix = " (expected %s)" % ", ".join(expected)
        super().__init__(f"{line}:{col}: {message}{suffix}")


class CatalogError(PrivsliceError):
    """Raised when a catalog document is malformed or self-contradictory."""


class TurtleParseError(PrivsliceError):
    """Raised when a Turtle document does not conform to the emitted subset."""


class AnalysisInputError(PrivsliceError):
    """Raised when an analysis operation is handed inconsistent inputs,
    e.g. an unknown statement id or a model that does not belong to the
    slice it is checked against."""
