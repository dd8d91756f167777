"""
Finite chains on a tripartitioned state space A ⊔ B ⊔ C.

Holds the chain and partition types, their validation, stopping-time
semantics and the shared error hierarchy.
"""
from .models import (
    Chain,
    Klass,
    Partition,
    ReachabilityReport,
    StoppingSpec,
    Tolerances,
)
from .chain import (
    build_chain,
    build_partition,
    partition_from_classes,
    stopping_spec,
    validate_absorption,
)

__all__ = [
    "Chain",
    "Klass",
    "Partition",
    "ReachabilityReport",
    "StoppingSpec",
    "Tolerances",
    "build_chain",
    "build_partition",
    "partition_from_classes",
    "stopping_spec",
    "validate_absorption",
]
