"""Exception types shared across the toolkit."""
from __future__ import annotations


def _located(message: str, line: int | None) -> str:
    return f"line {line}: {message}" if line is not None else message


class QcmapError(Exception):
    """Base class for every error raised by this package."""


class ParseError(QcmapError):
    """Malformed text input; carries a 1-based source line number when known."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(_located(message, line))
        self.line = line


class UnsupportedError(QcmapError):
    """Input is well formed but uses a construct outside the supported subset."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(_located(message, line))
        self.line = line


class QubitIndexError(QcmapError, IndexError):
    """A qubit index falls outside its declared register or device."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(_located(message, line))
        self.line = line


class InvalidArgumentError(QcmapError, ValueError):
    """An argument value violates a documented precondition."""


class CapacityError(QcmapError):
    """Circuit requires more qubits than the target device provides."""


class RoutingError(QcmapError):
    """No route exists between qubits that must interact."""


class DegenerateInputError(QcmapError, ValueError):
    """Statistic is undefined for this input (constant or too short)."""


class UnknownMetricError(QcmapError, KeyError):
    """Requested column name is not a known metric or report field."""


class CorpusError(QcmapError):
    """No usable input survived corpus processing."""
