"""
Trajectory sampling by inverse-CDF over the chain's fixed state order.

Substreams: path i of a run with seed s belongs to block k = i // block_size
and draws from ``Generator(PCG64(SeedSequence(s, spawn_key=(k,))))``. Inside
a block every still-running path consumes exactly one uniform per step, in
increasing path index. A single ``sample_path`` call uses
``SeedSequence(s)`` directly.
"""
from __future__ import annotations

import logging
import threading
import weakref
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, TypeVar

import numpy as np

from tw_chain import Chain, stopping_spec

from .models import DEFAULT_SIMULATION, SimulationConfig, StopReason, Trajectory

log = logging.getLogger(__name__)

T = TypeVar("T")


class CumulativeKernel:
    """
    Row-wise cumulative kernel laid out so that one ``searchsorted`` over
    ``row + cdf`` samples a step for many paths in different rows at once.
    """

    _cache: "weakref.WeakKeyDictionary[Chain, CumulativeKernel]" = weakref.WeakKeyDictionary()
    _lock = threading.Lock()

    def __init__(self, chain: Chain):
        P = chain.transition
        self.indptr = P.indptr
        self.indices = P.indices
        counts = np.diff(P.indptr)
        rows = np.repeat(np.arange(chain.n), counts)
        cdf = np.empty_like(P.data)
        for i in range(chain.n):
            lo, hi = P.indptr[i], P.indptr[i + 1]
            np.cumsum(P.data[lo:hi], out=cdf[lo:hi])
            cdf[hi - 1] = 1.0
        self.keys = rows + cdf

    @classmethod
    def of(cls, chain: Chain) -> "CumulativeKernel":
        with cls._lock:
            found = cls._cache.get(chain)
            if found is None:
                found = cls(chain)
                cls._cache[chain] = found
            return found

    def step(self, current: np.ndarray, u: np.ndarray) -> np.ndarray:
        """Next state indices for ``current`` given uniforms ``u`` in [0, 1)."""
        pos = np.searchsorted(self.keys, current + u, side="right")
        pos = np.minimum(pos, self.indptr[current + 1] - 1)
        return self.indices[pos]


def block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(block,))))


def sample_path(chain: Chain, start: str, stop: Iterable[str], seed: int, cap: int) -> Trajectory:
    """
    S_0 = start, then one inverse-CDF step per uniform until the walk is in
    ``stop`` or ``cap`` steps were taken.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    spec = stopping_spec(chain, stop)
    if spec.stops_at(start):
        return Trajectory(states=(start,), stop_reason=StopReason.hit_target)
    kernel = CumulativeKernel.of(chain)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    cur = np.array([chain.index[start]])
    path = [start]
    for _ in range(cap):
        cur = kernel.step(cur, rng.random(1))
        s = chain.states[int(cur[0])]
        path.append(s)
        if spec.stops_at(s):
            return Trajectory(states=tuple(path), stop_reason=StopReason.hit_target)
    return Trajectory(states=tuple(path), stop_reason=StopReason.truncated)


@dataclass
class BlockResult:
    """Per-path outcomes of one block, in path-index order."""

    final: np.ndarray
    steps: np.ndarray
    truncated: np.ndarray
    visits: Optional[np.ndarray] = None
    reached_other: Optional[np.ndarray] = None
    returned: Optional[np.ndarray] = None


def run_block(
    kernel: CumulativeKernel,
    start: int,
    stop_mask: np.ndarray,
    cap: int,
    rng: np.random.Generator,
    size: int,
    visit: Optional[int] = None,
    classes: Optional[np.ndarray] = None,
) -> BlockResult:
    """
    Simulate ``size`` paths from ``start`` until ``stop_mask`` or ``cap``.

    ``visit``: also count visits to that state at times before stopping.
    ``classes``: per-state code, 1 = own class, 2 = other class; tracks
    whether the other class is reached and whether the own class is
    re-entered afterwards, and stops a path as soon as both happened.
    """
    cur = np.full(size, start, dtype=np.intp)
    steps = np.zeros(size, dtype=np.int64)
    active = np.full(size, not stop_mask[start])
    visits = None
    if visit is not None:
        visits = np.zeros(size, dtype=np.int64)
        visits += (cur == visit) & active
    reached = returned = None
    if classes is not None:
        reached = np.zeros(size, dtype=bool)
        returned = np.zeros(size, dtype=bool)

    t = 0
    while t < cap:
        ids = np.nonzero(active)[0]
        if ids.size == 0:
            break
        nxt = kernel.step(cur[ids], rng.random(ids.size))
        cur[ids] = nxt
        steps[ids] += 1
        t += 1
        stopped = stop_mask[nxt]
        if visits is not None:
            visits[ids] += (nxt == visit) & ~stopped
        if classes is not None:
            code = classes[nxt]
            back = reached[ids] & (code == 1) & ~stopped
            returned[ids] |= back
            reached[ids] |= (code == 2) & ~stopped
            stopped = stopped | back
        active[ids[stopped]] = False

    return BlockResult(
        final=cur,
        steps=steps,
        truncated=active.copy(),
        visits=visits,
        reached_other=reached,
        returned=returned,
    )


def run_blocks(
    n_paths: int,
    seed: int,
    config: SimulationConfig,
    body: Callable[[np.random.Generator, int], T],
) -> List[T]:
    """Run ``body(rng, size)`` per block; results come back in block order."""
    sizes = [
        min(config.block_size, n_paths - k * config.block_size)
        for k in range(-(-n_paths // config.block_size))
    ]

    def one(k: int) -> T:
        return body(block_rng(seed, k), sizes[k])

    if config.workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            return list(pool.map(one, range(len(sizes))))
    return [one(k) for k in range(len(sizes))]


def merge(blocks: List[BlockResult]) -> BlockResult:
    def cat(name: str) -> Optional[np.ndarray]:
        parts = [getattr(b, name) for b in blocks]
        return None if parts[0] is None else np.concatenate(parts)

    return BlockResult(
        final=cat("final"),
        steps=cat("steps"),
        truncated=cat("truncated"),
        visits=cat("visits"),
        reached_other=cat("reached_other"),
        returned=cat("returned"),
    )
