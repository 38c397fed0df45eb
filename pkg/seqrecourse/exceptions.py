"""
Exception hierarchy for seqrecourse.
"""
from typing import Any, Dict, Optional


class SeqRecourseError(Exception):
    """Root of every error raised by this package."""


class ConfigError(SeqRecourseError, ValueError):
    """Invalid explainer configuration."""


class DimensionMismatchError(SeqRecourseError, ValueError):
    """A point or schema does not match the dataset dimension."""


class DataFormatError(SeqRecourseError, ValueError):
    """
    Malformed input data.

    Carries the 1-based data row and the column name (or index) when the
    problem can be pinned to a single cell.
    """

    def __init__(self, message: str, row: Optional[int] = None, column: Any = None):
        super().__init__(message)
        self.row = row
        self.column = column


class ModelError(SeqRecourseError, ValueError):
    """A scoring model cannot be fitted or evaluated."""


class IndexExhaustedError(SeqRecourseError):
    """No active points remain in a spatial index view."""


class UnknownPointError(SeqRecourseError, KeyError):
    """Unknown training id, or an id that is already deactivated."""


class GeometryError(SeqRecourseError, ValueError):
    """The deviation theorem's hypothesis does not hold."""


class UnsupportedDimensionError(SeqRecourseError, ValueError):
    """Operation only defined for a specific dimension (plots need d = 2)."""


class RecourseError(SeqRecourseError):
    """
    A pipeline stage failed.

    Args:
        message: Human readable reason
        stage: 'explore', 'exploit' or 'enhance'
        partial: Artifacts built before the failure (trace, graph, ledger, ...)
    """

    def __init__(self, message: str, stage: str, partial: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.stage = stage
        self.partial = dict(partial or {})

    def __str__(self) -> str:
        return f"[{self.stage}] {super().__str__()}"


class ExploreError(RecourseError):
    def __init__(self, message: str, partial: Optional[Dict[str, Any]] = None):
        super().__init__(message, 'explore', partial)


class ExploitError(RecourseError):
    def __init__(self, message: str, partial: Optional[Dict[str, Any]] = None):
        super().__init__(message, 'exploit', partial)


class NoPathError(RecourseError):
    """The counterfactual vertex cannot be reached under the edge weight rule."""


class UsageError(SeqRecourseError):
    """Bad command-line input caught after argument parsing (exit code 2)."""
