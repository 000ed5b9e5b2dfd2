"""Shared exception types."""


class TrigradError(Exception):
    """Base class for all domain errors."""


class HalfIntegerT(TrigradError):
    """Raised when an operation requires integer t-degrees but got halves."""


class BracketProduct(TrigradError):
    """Raised when multiplying two polynomials that both carry quantum brackets."""


class BracketEval(TrigradError):
    """Raised when a quantum bracket [N+c] is evaluated at N+c < 0."""


class PolynomialSyntax(TrigradError):
    """Raised on malformed polynomial text; carries position info."""

    def __init__(self, message: str, line: int = 1, column: int = 0):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class DuplicateName(TrigradError):
    """Raised when a database file shadows an existing record without override."""


class AssemblyError(TrigradError):
    """Raised when per-N results cannot be reassembled into bracket form."""


class StageMismatch(TrigradError):
    """Raised by the pipeline when a stage output differs from the expected record."""

    def __init__(self, stage: str, diff: str):
        super().__init__(f"stage '{stage}' mismatch:\n{diff}")
        self.stage = stage
        self.diff = diff
