"""Exceptions raised by the lab.

Each class also subclasses the closest built-in so callers may catch
either the precise type or the plain `ValueError` / `RuntimeError`.
"""
from collections.abc import Iterable

__all__ = [
    'AgreementLabError',
    'GraphFormatError',
    'DisconnectedGraphError',
    'EmptyVertexSetError',
    'GraphClassError',
    'UndecidedError',
    'ScheduleError',
    'AdversaryError',
    'ProtocolError',
    'LabellingError',
    'ComplexError',
    'TraceFormatError',
]


class AgreementLabError(Exception):
    """Base class for every error raised on purpose."""


class GraphFormatError(AgreementLabError, ValueError):
    """A graph could not be parsed or constructed.

    Stores the 1-based source `line` when the error came from text.
    """

    @property
    def line(self) -> int | None:
        return self._line

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self._line = line


class DisconnectedGraphError(GraphFormatError):

    def __init__(self, message: str | None = None, line: int | None = None):
        super().__init__(message or "graph is not connected", line)


class EmptyVertexSetError(AgreementLabError, ValueError):

    def __init__(self, message: str = "vertex set must be nonempty"):
        super().__init__(message)


class GraphClassError(AgreementLabError, ValueError):
    """An operation was asked of a graph outside its required class."""


class UndecidedError(AgreementLabError, RuntimeError):
    """A budget guard tripped before an answer was reached.

    This is never a wrong answer: callers report "undecided".
    """

    @property
    def budget(self) -> str:
        return self._budget

    @property
    def limit(self) -> int:
        return self._limit

    def __init__(self, budget: str, limit: int, actual: int, hint: str = ""):
        message = f"undecided: {budget}={actual} exceeds budget {limit}"
        if hint:
            message = f"{message} ({hint})"
        super().__init__(message)
        self._budget = budget
        self._limit = limit


class ScheduleError(AgreementLabError, ValueError):
    """A schedule is malformed or breaks a protocol's wait rule."""

    @property
    def object_index(self) -> int | None:
        return self._object_index

    def __init__(self, message: str, object_index: int | None = None):
        if object_index is not None:
            message = f"object {object_index}: {message}"
        super().__init__(message)
        self._object_index = object_index


class AdversaryError(AgreementLabError, ValueError):
    """A synchronous crash plan is malformed or exceeds `f`."""


class ProtocolError(AgreementLabError, ValueError):
    """A protocol rule was applied outside its domain."""


class LabellingError(AgreementLabError, ValueError):
    """A labelling is malformed or violates its defining conditions."""

    @property
    def vertices(self) -> tuple[int, ...]:
        return self._vertices

    def __init__(self, message: str, vertices: Iterable[int] = ()):
        self._vertices = tuple(vertices)
        if self._vertices:
            message = f"{message}: {list(self._vertices)}"
        super().__init__(message)


class ComplexError(AgreementLabError, ValueError):
    """A simplicial complex is malformed."""


class TraceFormatError(AgreementLabError, ValueError):
    """A serialized trace does not match the documented schema."""
