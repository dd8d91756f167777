"""
Core data models for tw_chain.

A finite random walk is a ``Chain`` (ordered state labels plus a row-stochastic
one-step kernel) together with a ``Partition`` of its states into the classes
A, B and C. Both are immutable after construction.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Mapping, Tuple

import numpy as np
import scipy.sparse as sp


class Klass(str, Enum):
    A = "A"
    B = "B"
    C = "C"


@dataclass(frozen=True)
class Tolerances:
    """Validation tolerances; part of the chain contract."""

    # Allowed deviation of a row sum from 1 before the row is rejected.
    stochastic: float = 1e-12
    # Slack allowed on probabilities computed downstream (defects, masses).
    probability: float = 1e-12


DEFAULT_TOLERANCES = Tolerances()


@dataclass(frozen=True, eq=False)
class Chain:
    """Finite state set + one-step transition matrix p_1(x, y) in CSR form."""

    states: Tuple[str, ...]
    transition: sp.csr_matrix

    @property
    def n(self) -> int:
        return len(self.states)

    @cached_property
    def index(self) -> Dict[str, int]:
        return {s: i for i, s in enumerate(self.states)}

    @cached_property
    def dense(self) -> np.ndarray:
        out = self.transition.toarray()
        out.setflags(write=False)
        return out

    def indices(self, states: Iterable[str]) -> np.ndarray:
        """Indices of ``states`` sorted by the chain's state order."""
        return np.array(sorted(self.index[s] for s in states), dtype=np.intp)

    def mask(self, states: Iterable[str]) -> np.ndarray:
        m = np.zeros(self.n, dtype=bool)
        for s in states:
            m[self.index[s]] = True
        return m

    def ordered(self, states: Iterable[str]) -> Tuple[str, ...]:
        return tuple(self.states[i] for i in self.indices(states))

    def p(self, x: str, y: str) -> float:
        return float(self.transition[self.index[x], self.index[y]])

    def row(self, x: str) -> Dict[str, float]:
        """Support of p_1(x, .) as {state: probability}."""
        i = self.index[x]
        start, end = self.transition.indptr[i], self.transition.indptr[i + 1]
        cols = self.transition.indices[start:end]
        vals = self.transition.data[start:end]
        return {self.states[j]: float(v) for j, v in zip(cols, vals)}


@dataclass(frozen=True)
class Partition:
    """Disjoint cover of the chain's states by the classes A, B, C."""

    labels: Mapping[str, Klass]
    order: Tuple[str, ...] = field(repr=False)

    def klass(self, state: str) -> Klass:
        return self.labels[state]

    def members(self, k: Klass) -> Tuple[str, ...]:
        return tuple(s for s in self.order if self.labels[s] is k)

    @cached_property
    def A(self) -> Tuple[str, ...]:
        return self.members(Klass.A)

    @cached_property
    def B(self) -> Tuple[str, ...]:
        return self.members(Klass.B)

    @cached_property
    def C(self) -> Tuple[str, ...]:
        return self.members(Klass.C)

    @property
    def AB(self) -> Tuple[str, ...]:
        """A ∪ B in state order."""
        return tuple(s for s in self.order if self.labels[s] is not Klass.C)

    def as_classes(self) -> Dict[str, list]:
        return {"A": list(self.A), "B": list(self.B), "C": list(self.C)}


@dataclass(frozen=True)
class StoppingSpec:
    """
    First hitting time of ``target`` with ``inf over k >= 0`` semantics:
    a walk started inside the target is stopped at time 0.
    """

    target: FrozenSet[str]
    semantics: str = "inf k>=0"

    def stops_at(self, state: str) -> bool:
        return state in self.target

    def hitting_index(self, path: Iterable[str]) -> int | None:
        """First k with path[k] in target, or None if the path never enters it."""
        for k, s in enumerate(path):
            if s in self.target:
                return k
        return None


@dataclass(frozen=True)
class ReachabilityReport:
    """Diagnostic: states of A ∪ B from which C cannot be reached."""

    ok: bool
    offending_states: Tuple[str, ...] = ()
