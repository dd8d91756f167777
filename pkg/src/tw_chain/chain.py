"""
Construction and validation of chains and partitions.
"""
from __future__ import annotations

import logging
from typing import Iterable, Mapping, Sequence, Union

import numpy as np
import scipy.sparse as sp

from .errors import (
    DimensionError,
    DuplicateStateError,
    EmptyClassError,
    MissingStateError,
    NegativeEntryError,
    PartitionClassError,
    RowSumError,
    UnknownStateError,
)
from .graph import reaching_mask
from .models import (
    DEFAULT_TOLERANCES,
    Chain,
    Klass,
    Partition,
    ReachabilityReport,
    StoppingSpec,
    Tolerances,
)

log = logging.getLogger(__name__)

MatrixLike = Union[Sequence[Sequence[float]], np.ndarray, sp.spmatrix]


def build_chain(
    states: Sequence[str],
    transition: MatrixLike,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> Chain:
    """
    Validate ``transition`` against ``states`` and return an immutable Chain.

    Rows whose sum is within ``tolerances.stochastic`` of 1 are rescaled to
    sum to 1; any larger deviation is rejected.
    """
    labels = tuple(str(s) for s in states)
    if not labels:
        raise DimensionError("a chain needs at least one state")
    seen: set[str] = set()
    for s in labels:
        if s in seen:
            raise DuplicateStateError(f"state {s!r} appears more than once")
        seen.add(s)

    n = len(labels)
    if sp.issparse(transition):
        mat = sp.csr_matrix(transition, dtype=np.float64)
    else:
        try:
            dense = np.asarray(transition, dtype=np.float64)
        except ValueError as exc:
            raise DimensionError(f"transition matrix is ragged: {exc}") from exc
        if dense.ndim != 2:
            raise DimensionError(f"transition matrix must be 2-D, got {dense.ndim}-D")
        mat = sp.csr_matrix(dense)
    if mat.shape != (n, n):
        raise DimensionError(f"transition matrix is {mat.shape[0]}x{mat.shape[1]}, expected {n}x{n}")

    mat.sum_duplicates()
    mat.sort_indices()
    rows = np.repeat(np.arange(n), np.diff(mat.indptr))
    if not np.all(np.isfinite(mat.data)):
        bad = labels[int(rows[np.argmin(np.isfinite(mat.data))])]
        raise NegativeEntryError(f"row {bad!r} has a non-finite entry")
    if mat.data.size and mat.data.min() < 0.0:
        bad = labels[int(rows[np.argmin(mat.data)])]
        raise NegativeEntryError(f"row {bad!r} has a negative entry")
    if mat.data.size and mat.data.max() > 1.0 + tolerances.stochastic:
        bad = labels[int(rows[np.argmax(mat.data)])]
        raise RowSumError(f"row {bad!r} has an entry above 1")

    sums = np.asarray(mat.sum(axis=1)).ravel()
    dev = np.abs(sums - 1.0)
    if np.any(dev > tolerances.stochastic):
        i = int(np.argmax(dev))
        raise RowSumError(f"row {labels[i]!r} sums to {sums[i]!r}, expected 1")
    # rows off by more than rounding are rescaled; rescaled rows stay put on a second pass
    drift = dev > np.finfo(np.float64).eps * max(n, 4)
    if drift.any():
        mat = sp.csr_matrix(sp.diags(np.where(drift, 1.0 / sums, 1.0)) @ mat)
        mat.sort_indices()
    mat.eliminate_zeros()
    return Chain(states=labels, transition=mat)


def build_partition(chain: Chain, assignment: Mapping[str, Union[str, Klass]]) -> Partition:
    """Validate a state -> class map against the chain."""
    for s in assignment:
        if s not in chain.index:
            raise UnknownStateError(f"state {s!r} is not in the chain")
    missing = [s for s in chain.states if s not in assignment]
    if missing:
        raise MissingStateError(f"states without a class: {', '.join(missing)}")

    labels = {}
    for s in chain.states:
        raw = assignment[s]
        try:
            labels[s] = Klass(raw.value if isinstance(raw, Klass) else str(raw))
        except ValueError:
            raise PartitionClassError(f"state {s!r} has unknown class {raw!r}") from None

    part = Partition(labels=labels, order=chain.states)
    if not part.A:
        raise EmptyClassError("class A is empty")
    if not part.C:
        raise EmptyClassError("class C is empty")
    return part


def partition_from_classes(chain: Chain, classes: Mapping[str, Iterable[str]]) -> Partition:
    """Build a partition from the {"A": [...], "B": [...], "C": [...]} form."""
    assignment: dict[str, str] = {}
    for k, members in classes.items():
        if k not in Klass.__members__:
            raise PartitionClassError(f"unknown class {k!r}")
        for s in members:
            if s in assignment:
                raise PartitionClassError(f"state {s!r} is in both {assignment[s]} and {k}")
            assignment[s] = k
    return build_partition(chain, assignment)


def stopping_spec(chain: Chain, target: Iterable[str]) -> StoppingSpec:
    target = frozenset(target)
    if not target:
        raise DimensionError("stopping target is empty")
    unknown = sorted(target - set(chain.states))
    if unknown:
        raise UnknownStateError(f"target states not in the chain: {', '.join(unknown)}")
    return StoppingSpec(target=target)


def validate_absorption(chain: Chain, partition: Partition) -> ReachabilityReport:
    """
    Every state of A ∪ B must reach C along a support path inside A ∪ B.

    On a finite chain this is equivalent to T_C < inf almost surely from
    every starting state.
    """
    ab = chain.mask(partition.AB)
    ok_mask = reaching_mask(chain.transition, ab, chain.mask(partition.C))
    offending = tuple(s for s, bad in zip(chain.states, ab & ~ok_mask) if bad)
    if offending:
        log.debug("C unreachable from %d state(s): %s", len(offending), ", ".join(offending))
    return ReachabilityReport(ok=not offending, offending_states=offending)
