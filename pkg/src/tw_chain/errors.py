"""
Error hierarchy shared by every tripartite-walk package.

Each class carries a stable ``kind`` slug; the CLI prints it as
``error:<kind>:<detail>`` so that callers can grep for it.
"""
from __future__ import annotations


class ChainError(ValueError):
    """Bad input: the chain, partition, document or arguments are invalid."""

    kind = "invalid"


class DimensionError(ChainError):
    kind = "dimension"


class RowSumError(ChainError):
    kind = "row-sum"


class NegativeEntryError(ChainError):
    kind = "negative-entry"


class DuplicateStateError(ChainError):
    kind = "duplicate-state"


class MissingStateError(ChainError):
    kind = "missing-state"


class UnknownStateError(ChainError):
    kind = "unknown-state"


class EmptyClassError(ChainError):
    kind = "empty-class"


class PartitionClassError(ChainError):
    kind = "partition-class"


class NotAbsorbingError(ChainError):
    kind = "not-absorbing"


class SubsetError(ChainError):
    kind = "subset"


class CapExceededError(ChainError):
    kind = "cap-exceeded"


class GeometryError(ChainError):
    kind = "geometry"


class RetriesExhaustedError(ChainError):
    kind = "retries-exhausted"


class DocumentError(ChainError):
    kind = "document"


class ConfigError(ChainError):
    kind = "config"


class SolverError(RuntimeError):
    """Numerical failure while solving a linear system."""

    kind = "solver"


class DivergentDomainError(SolverError):
    kind = "divergent-domain"


class SolveError(SolverError):
    kind = "solve"
