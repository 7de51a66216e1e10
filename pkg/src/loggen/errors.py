"""Domain errors raised across the toolkit.

Every error carries a short machine-readable ``code`` (its class name) so the
CLI can emit one-line JSON diagnostics.
"""


class LoggenError(Exception):
    """Base class for all domain errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


class UnterminatedLiteral(LoggenError):
    """Unclosed string/char literal or block comment."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class InvalidConfig(LoggenError):
    pass


class UnknownPolicy(LoggenError):
    pass


class ShapeMismatch(LoggenError):
    pass


class ProtocolError(LoggenError):
    pass


class BackendUnavailable(LoggenError):
    pass


class NoMask(LoggenError):
    pass


class NoAnchors(LoggenError):
    pass


class IndexOutOfRange(LoggenError):
    pass


class GenerationEmpty(LoggenError):
    pass


class EmptyCorpus(LoggenError):
    pass


class EmptyModel(LoggenError):
    pass


class EmptyPositions(LoggenError):
    pass


class EmptyDataset(LoggenError):
    pass


class EmptyReference(LoggenError):
    pass


class LengthMismatch(LoggenError):
    pass


class SpanNotDetected(LoggenError):
    pass


class PrecedingTokenNotAnchor(LoggenError):
    pass


class ParseError(LoggenError):
    """Malformed dataset line."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line
