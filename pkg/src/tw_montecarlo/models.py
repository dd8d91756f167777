"""
Data models for the Monte Carlo oracle.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Tuple


class StopReason(str, Enum):
    hit_target = "hit_target"
    truncated = "truncated"


class Interval(str, Enum):
    normal = "normal"
    wilson = "wilson"
    # deterministic short-circuit, no sampling
    exact = "exact"


class Verdict(str, Enum):
    consistent = "consistent"
    inconsistent = "inconsistent"
    unreliable = "unreliable"


class TruncationWarning(UserWarning):
    """Too many simulated paths hit the step cap; the estimate is biased."""


@dataclass(frozen=True)
class SimulationConfig:
    """Simulation knobs. Results are bit-identical for identical knobs."""

    n_paths: int = 10_000
    cap: int = 1_000_000
    confidence_level: float = 0.99
    # Fraction of truncated paths above which an estimate is unreliable.
    truncation_threshold: float = 0.001
    # Paths per substream; path i draws from block i // block_size.
    block_size: int = 4096
    # Threads over blocks; the reduction order is fixed by block index.
    workers: int = 1


DEFAULT_SIMULATION = SimulationConfig()


@dataclass(frozen=True)
class Trajectory:
    states: Tuple[str, ...]
    stop_reason: StopReason

    @property
    def steps(self) -> int:
        return len(self.states) - 1


@dataclass(frozen=True)
class SimulationEstimate:
    """Point estimate with a two-sided interval at ``confidence_level``."""

    mean: float
    ci_half_width: float
    n_paths: int
    n_truncated: int
    seed: int
    confidence_level: float
    ci_low: float
    ci_high: float
    interval: Interval = Interval.normal
    unreliable: bool = False

    @property
    def truncation_rate(self) -> float:
        return self.n_truncated / self.n_paths if self.n_paths else 0.0
