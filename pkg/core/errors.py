"""
Exception hierarchy shared by every package.

The CLI maps these onto exit codes: ConfigError -> 1, DataError -> 2,
everything else -> 3.
"""
from __future__ import annotations

from typing import Optional


class SimbenchError(Exception):
    """Base class for all errors raised by simbench."""
    pass


class ConfigError(SimbenchError, ValueError):
    """Raised when a configuration value or flag is invalid."""
    pass


class InvalidLayoutError(ConfigError):
    """Raised when a network layout or activation list is unusable."""
    pass


class ShapeError(SimbenchError, ValueError):
    """Raised when array widths or lengths do not match."""
    pass


class CacheError(SimbenchError, RuntimeError):
    """Raised when a forward cache does not belong to the network being differentiated."""
    pass


class NotTrainedError(SimbenchError, RuntimeError):
    """Raised when a learned measure is scored before training."""
    pass


class DataError(SimbenchError):
    """Raised when input data cannot be read or verified."""

    def __init__(self, message: str, row: Optional[int] = None) -> None:
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)
        self.row = row


class StratificationError(DataError):
    """Raised when a class has fewer members than the number of folds."""

    def __init__(self, class_name: str, count: int, k: int) -> None:
        super().__init__(f"class '{class_name}' has {count} member(s), fewer than k={k} folds")
        self.class_name = class_name
        self.count = count
        self.k = k


class ProtocolError(SimbenchError, RuntimeError):
    """Raised when the retrieval protocol cannot be applied (e.g. empty partition)."""
    pass


class ProjectionError(SimbenchError, ValueError):
    """Raised when a PCA projection is impossible for the given rows."""
    pass
