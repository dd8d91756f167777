"""
Result types for exact analysis.

Values are plain floats keyed by state labels; array-backed types keep the
ndarray alongside for batch consumers.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import FrozenSet, Mapping, Tuple

import numpy as np


@dataclass(frozen=True, eq=False)
class GreensMatrix:
    """G_D(x, y): expected visits to y before leaving D, started at x."""

    domain: Tuple[str, ...]
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_pos", {s: i for i, s in enumerate(self.domain)})

    def get(self, x: str, y: str) -> float:
        """Zero when x or y is outside the domain."""
        i = self._pos.get(x)
        j = self._pos.get(y)
        if i is None or j is None:
            return 0.0
        return float(self.values[i, j])


@dataclass(frozen=True)
class HittingDist:
    """H_T(x, .) plus the mass that never reaches T."""

    start: str
    target: Tuple[str, ...]
    mass: Mapping[str, float]
    defect: float

    def total(self) -> float:
        return sum(self.mass.values())


@dataclass(frozen=True)
class ExcursionStats:
    """
    Per-state excursion probabilities between A and B before C, their
    suprema, and the expected-time suprema f_A, f_B (steps).
    """

    psi: Mapping[str, float]
    sigma: Mapping[str, float]
    rho: Mapping[str, float]
    phi: Mapping[str, float]
    psi_sup: float
    sigma_sup: float
    f_A: float
    f_B: float
    # E^a(T_{B∪C}) for a in A and E^b(T_{A∪C}) for b in B
    exit_time: Mapping[str, float] = field(default_factory=dict)

    def reach_other(self, x: str) -> float:
        """ψ_x for x in A, σ_x for x in B."""
        return self.psi[x] if x in self.psi else self.sigma[x]

    def return_after_other(self, x: str) -> float:
        """ρ_x for x in A, φ_x for x in B."""
        return self.rho[x] if x in self.rho else self.phi[x]


@dataclass(frozen=True)
class HitTimeVector:
    """E^x[T_target] for every state (0 on the target)."""

    target: FrozenSet[str]
    values: Mapping[str, float]

    def __getitem__(self, x: str) -> float:
        return self.values[x]
