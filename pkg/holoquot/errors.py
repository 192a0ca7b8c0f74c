from typing import Any, Optional, Sequence


class HoloquotError(Exception):
    """Base class for every error raised by the package."""

    def __init__(self, message: str, detail: Optional[Any] = None):
        super().__init__(message)
        self.message = message
        self.detail = detail


class StructuralError(HoloquotError):
    """Mismatched algebras, wrong degree or dimension, malformed structure."""


class EvaluationError(HoloquotError):
    """A generator was left unassigned when evaluating at a point."""


class DomainError(HoloquotError):
    """Evaluation left the real domain, or a vector field vanished."""


class PreconditionError(HoloquotError):
    """A builder was handed data violating its stated preconditions."""


class ConsistencyError(HoloquotError):
    """An internal identity that must vanish left a residual."""

    def __init__(self, message: str, residual: float = float("nan"), detail: Optional[Any] = None):
        super().__init__(message, detail)
        self.residual = residual


class InvarianceError(ConsistencyError):
    """A vector field does not preserve the structure (Lie derivative residual)."""


class AmbiguousRankError(HoloquotError):
    """A numeric rank changed across the configured thresholds."""

    def __init__(self, message: str, ranks: Sequence[int]):
        super().__init__(message, list(ranks))
        self.ranks = list(ranks)


class CatalogError(HoloquotError):
    """Unknown catalog identifier or suite name."""


class ParseError(HoloquotError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column
