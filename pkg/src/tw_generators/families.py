"""
Chain + partition families: the canonical triad, 1-D birth-death walks,
grid annuli where C separates A from B, and seeded random chains.

Every generator is a pure function of its arguments.
"""
from __future__ import annotations

import logging
from typing import Iterable, List, Tuple

import numpy as np
import scipy.sparse as sp

from tw_chain import Chain, Klass, Partition, build_chain, build_partition, validate_absorption
from tw_chain.errors import ChainError, GeometryError, PartitionClassError, RetriesExhaustedError
from tw_chain.graph import reaching_mask

from .models import GridSpec

log = logging.getLogger(__name__)

Generated = Tuple[Chain, Partition]

BOUNDARIES = ("reflect", "absorb")

_MOVES = ((-1, 0), (1, 0), (0, -1), (0, 1))


def triad() -> Generated:
    chain = build_chain(
        ["a", "b", "c"],
        [[0.0, 0.5, 0.5], [0.5, 0.0, 0.5], [0.0, 0.0, 1.0]],
    )
    return chain, build_partition(chain, {"a": "A", "b": "B", "c": "C"})


def path_chain(
    n: int,
    p_right: float,
    A: Iterable[int],
    B: Iterable[int],
    C: Iterable[int],
    boundary: str = "reflect",
) -> Generated:
    """
    Nearest-neighbour walk on 0..n-1 stepping right with ``p_right``; C
    states are absorbing. ``boundary`` decides the endpoints: ``reflect``
    sends the off-end move to the inner neighbour, ``absorb`` makes the
    endpoint absorbing.
    """
    if boundary not in BOUNDARIES:
        raise ChainError(f"boundary must be one of {BOUNDARIES}, got {boundary!r}")
    if not 0.0 <= p_right <= 1.0:
        raise ChainError(f"p_right must lie in [0, 1], got {p_right}")
    if n < 2:
        raise PartitionClassError("a path chain needs at least 2 states")

    labels: dict[int, Klass] = {}
    for k, members in ((Klass.A, A), (Klass.B, B), (Klass.C, C)):
        for i in members:
            i = int(i)
            if not 0 <= i < n:
                raise PartitionClassError(f"index {i} outside 0..{n - 1}")
            if i in labels:
                raise PartitionClassError(f"index {i} is in both {labels[i].value} and {k.value}")
            labels[i] = k
    if len(labels) != n:
        missing = sorted(set(range(n)) - set(labels))
        raise PartitionClassError(f"indices without a class: {missing}")

    P = np.zeros((n, n))
    for i in range(n):
        if labels[i] is Klass.C or (boundary == "absorb" and i in (0, n - 1)):
            P[i, i] = 1.0
            continue
        right = i + 1 if i + 1 < n else i - 1
        left = i - 1 if i > 0 else i + 1
        P[i, right] += p_right
        P[i, left] += 1.0 - p_right

    chain = build_chain([str(i) for i in range(n)], P)
    return chain, build_partition(chain, {str(i): k for i, k in labels.items()})


def _grid_kernel(spec: GridSpec, absorbing: np.ndarray) -> sp.csr_matrix:
    """Lazy 4-neighbour walk; off-grid moves stay put."""
    h, w = spec.height, spec.width
    step = (1.0 - spec.laziness) / 4.0
    rows: List[int] = []
    cols: List[int] = []
    vals: List[float] = []
    for r in range(h):
        for c in range(w):
            i = r * w + c
            if absorbing[i]:
                rows.append(i)
                cols.append(i)
                vals.append(1.0)
                continue
            stay = spec.laziness
            for dr, dc in _MOVES:
                rr, cc = r + dr, c + dc
                if 0 <= rr < h and 0 <= cc < w:
                    rows.append(i)
                    cols.append(rr * w + cc)
                    vals.append(step)
                else:
                    stay += step
            if stay > 0.0:
                rows.append(i)
                cols.append(i)
                vals.append(stay)
    return sp.csr_matrix((vals, (rows, cols)), shape=(h * w, h * w))


def _grid(spec: GridSpec, labels: List[Klass]) -> Generated:
    absorbing = np.array([k is Klass.C for k in labels])
    states = [GridSpec.label(r, c) for r in range(spec.height) for c in range(spec.width)]
    chain = build_chain(states, _grid_kernel(spec, absorbing))
    part = build_partition(chain, dict(zip(states, labels)))
    report = validate_absorption(chain, part)
    if not report.ok:
        raise GeometryError(f"{len(report.offending_states)} grid cell(s) cannot reach C")
    return chain, part


def _annulus_labels(spec: GridSpec) -> List[Klass]:
    out = []
    for r in range(spec.height):
        for c in range(spec.width):
            d = spec.distance(r, c)
            if d < spec.inner_radius:
                out.append(Klass.A)
            elif d < spec.outer_radius:
                out.append(Klass.C)
            else:
                out.append(Klass.B)
    return out


def grid_annulus(spec: GridSpec) -> Generated:
    """
    A = Chebyshev disc of radius ``inner_radius`` around the center, C the
    ring up to ``outer_radius`` (absorbing), B the rest. The ring must cut
    every 4-neighbour path from A to B.
    """
    chain, part = _grid(spec, _annulus_labels(spec))
    leaks = reaching_mask(chain.transition, chain.mask(part.A), chain.mask(part.B))
    if leaks.any():
        raise GeometryError("the C ring does not separate A from B")
    return chain, part


def ring_order(spec: GridSpec) -> List[Tuple[int, int]]:
    """
    Order in which ring cells are opened by ``punctured_annulus``: first the
    straight channel to the right of the center, then the remaining ring
    cells by Manhattan distance to the center, ties by row then column.
    """
    cy, cx = spec.center
    channel = [(cy, cx + d) for d in range(spec.inner_radius, spec.outer_radius)]
    taken = set(channel)
    rest = [
        (r, c)
        for r in range(spec.height)
        for c in range(spec.width)
        if spec.inner_radius <= spec.distance(r, c) < spec.outer_radius and (r, c) not in taken
    ]
    rest.sort(key=lambda rc: (abs(rc[0] - cy) + abs(rc[1] - cx), rc[0], rc[1]))
    return channel + rest


def punctured_annulus(spec: GridSpec, gap: int) -> Generated:
    """
    ``grid_annulus`` with the first ``gap`` cells of ``ring_order`` moved
    from C to B. Opened cells carry ordinary walk rows.
    """
    order = ring_order(spec)
    if not 1 <= gap < len(order):
        raise GeometryError(f"gap must lie in 1..{len(order) - 1}, got {gap}")
    labels = _annulus_labels(spec)
    for r, c in order[:gap]:
        labels[r * spec.width + c] = Klass.B
    return _grid(spec, labels)


def _normalise_fractions(class_fractions: Tuple[float, float, float]) -> np.ndarray:
    fr = np.asarray(class_fractions, dtype=np.float64)
    if fr.shape != (3,) or not np.all(np.isfinite(fr)) or fr.min() < 0.0:
        raise ChainError(f"class_fractions must be three non-negative numbers, got {class_fractions}")
    if fr[0] <= 0.0 or fr[2] <= 0.0:
        raise ChainError("class fractions for A and C must be positive")
    return fr / fr.sum()


def random_chain(
    n: int,
    seed: int,
    sparsity: float = 0.5,
    class_fractions: Tuple[float, float, float] = (0.4, 0.3, 0.3),
    max_retries: int = 100,
) -> Generated:
    """
    Random support (each off-diagonal entry absent with probability
    ``sparsity``), uniform weights normalised per row, classes drawn by
    ``class_fractions``, C rows absorbing. Draws are repeated from the same
    seeded stream until the result passes validate_absorption.
    """
    if n < 3:
        raise ChainError(f"random_chain needs n >= 3, got {n}")
    if not 0.0 <= sparsity < 1.0:
        raise ChainError(f"sparsity must lie in [0, 1), got {sparsity}")
    fractions = _normalise_fractions(class_fractions)
    rng = np.random.Generator(np.random.PCG64(seed))
    states = [f"s{i}" for i in range(n)]
    off = ~np.eye(n, dtype=bool)

    for attempt in range(max_retries):
        classes = rng.choice(3, size=n, p=fractions)
        weights = rng.random((n, n))
        present = (rng.random((n, n)) >= sparsity) & off
        fallback = rng.integers(n - 1, size=n)
        if not (classes == 0).any() or not (classes == 2).any():
            continue

        P = np.where(present, weights, 0.0)
        for i in range(n):
            if classes[i] == 2:
                P[i] = 0.0
                P[i, i] = 1.0
            elif not P[i].any():
                j = fallback[i] + (fallback[i] >= i)
                P[i, j] = 1.0
        P /= P.sum(axis=1, keepdims=True)

        chain = build_chain(states, P)
        part = build_partition(chain, {s: "ABC"[k] for s, k in zip(states, classes)})
        if validate_absorption(chain, part).ok:
            log.debug("random_chain(n=%d, seed=%d) accepted after %d attempt(s)", n, seed, attempt + 1)
            return chain, part

    raise RetriesExhaustedError(f"no absorbing chain after {max_retries} attempts (n={n}, seed={seed})")
