"""Exception types shared across the package.

Every user-facing failure mode gets its own class so the CLI and the HTTP
service can map them to exit codes / status codes without string matching.
"""

from __future__ import annotations


class CodezoomError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(CodezoomError):
    """Pseudocode text does not conform to the grammar."""

    def __init__(self, line: int, column: int, message: str, expected: list[str] | None = None):
        self.line = line
        self.column = column
        self.message = message
        self.expected = list(expected or [])
        super().__init__(str(self))

    def __str__(self) -> str:
        text = f"line {self.line}, column {self.column}: {self.message}"
        if self.expected:
            text += " (expected " + " or ".join(self.expected) + ")"
        return text


class SchemaError(CodezoomError):
    """An interchange document violates the schema.

    `path` points at the offending value (e.g. ``steps[0].then``), `constraint`
    names the first violated rule (e.g. ``(Statement)+``).
    """

    def __init__(self, message: str, path: str, constraint: str):
        self.message = message
        self.path = path
        self.constraint = constraint
        super().__init__(f"{path or '<document>'}: {message}")


class RangeError(CodezoomError):
    """A line range does not address selectable content."""


class LlmError(CodezoomError):
    """A model call failed.

    Kinds: ``network``, ``auth``, ``schema-after-retries``,
    ``transcript-exhausted``, ``transcript-mismatch``, ``transcript-invalid``,
    ``cassette-miss``.
    """

    def __init__(self, kind: str, message: str, *, violation: SchemaError | None = None,
                 attempts: int = 0):
        self.kind = kind
        self.message = message
        self.violation = violation
        self.attempts = attempts
        super().__init__(f"{kind}: {message}")


class PipelineError(CodezoomError):
    """A translation pipeline step failed after exhausting its retries."""

    def __init__(self, kind: str, message: str, attempts: int = 0):
        self.kind = kind
        self.message = message
        self.attempts = attempts
        super().__init__(f"{kind}: {message}")


class SummaryShapeError(CodezoomError):
    """Collapse asked for a one-statement summary and kept getting more."""


class InvalidStateError(CodezoomError):
    """An operation was issued against a session in the wrong state."""
