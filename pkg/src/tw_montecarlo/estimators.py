"""
Monte Carlo estimators for the exact quantities, and their comparison.

Proportions get Wilson intervals, means normal-approximation intervals.
"""
from __future__ import annotations

import logging
import math
import warnings
from typing import Dict, Iterable

import numpy as np
from scipy.stats import norm

from tw_chain import Chain, Klass, Partition, stopping_spec
from tw_chain.errors import PartitionClassError

from .models import (
    DEFAULT_SIMULATION,
    Interval,
    SimulationConfig,
    SimulationEstimate,
    TruncationWarning,
    Verdict,
)
from .sampler import CumulativeKernel, merge, run_block, run_blocks

log = logging.getLogger(__name__)

# Slack on |exact - mean| for zero-width (deterministic) estimates.
EXACT_SLACK = 1e-12


def z_value(confidence_level: float) -> float:
    """Two-sided standard normal quantile."""
    return float(norm.ppf(0.5 + confidence_level / 2.0))


def wilson(successes: int, n: int, z: float) -> tuple[float, float]:
    if n == 0:
        return 0.0, 1.0
    p = successes / n
    den = 1.0 + z * z / n
    center = (p + z * z / (2 * n)) / den
    half = z * math.sqrt(p * (1.0 - p) / n + z * z / (4 * n * n)) / den
    return max(0.0, center - half), min(1.0, center + half)


def _flag(n_truncated: int, n_paths: int, what: str, config: SimulationConfig) -> bool:
    unreliable = n_paths > 0 and n_truncated / n_paths > config.truncation_threshold
    if unreliable:
        msg = f"{what}: {n_truncated}/{n_paths} paths hit the step cap; estimate unreliable"
        log.warning(msg)
        warnings.warn(msg, TruncationWarning, stacklevel=3)
    return unreliable


def _exact(value: float, n_paths: int, seed: int, config: SimulationConfig) -> SimulationEstimate:
    return SimulationEstimate(
        mean=value,
        ci_half_width=0.0,
        n_paths=n_paths,
        n_truncated=0,
        seed=seed,
        confidence_level=config.confidence_level,
        ci_low=value,
        ci_high=value,
        interval=Interval.exact,
    )


def _mean_estimate(samples: np.ndarray, n_truncated: int, seed: int, what: str,
                   config: SimulationConfig) -> SimulationEstimate:
    n = samples.size
    mean = float(samples.mean())
    sd = float(samples.std(ddof=1)) if n > 1 else 0.0
    half = z_value(config.confidence_level) * sd / math.sqrt(n)
    return SimulationEstimate(
        mean=mean,
        ci_half_width=half,
        n_paths=n,
        n_truncated=n_truncated,
        seed=seed,
        confidence_level=config.confidence_level,
        ci_low=mean - half,
        ci_high=mean + half,
        interval=Interval.normal,
        unreliable=_flag(n_truncated, n, what, config),
    )


def _proportion_estimate(successes: int, n: int, n_truncated: int, seed: int, what: str,
                         config: SimulationConfig) -> SimulationEstimate:
    p = successes / n
    lo, hi = wilson(successes, n, z_value(config.confidence_level))
    return SimulationEstimate(
        mean=p,
        ci_half_width=max(p - lo, hi - p),
        n_paths=n,
        n_truncated=n_truncated,
        seed=seed,
        confidence_level=config.confidence_level,
        ci_low=lo,
        ci_high=hi,
        interval=Interval.wilson,
        unreliable=_flag(n_truncated, n, what, config),
    )


def _settings(n_paths, cap, config: SimulationConfig) -> tuple[int, int]:
    n = config.n_paths if n_paths is None else int(n_paths)
    c = config.cap if cap is None else int(cap)
    if n < 1 or c < 1:
        raise ValueError("n_paths and cap must be >= 1")
    return n, c


def estimate_green(
    chain: Chain,
    domain: Iterable[str],
    x: str,
    y: str,
    n_paths: int | None = None,
    seed: int = 0,
    cap: int | None = None,
    config: SimulationConfig = DEFAULT_SIMULATION,
) -> SimulationEstimate:
    """Sample mean of the number of visits to y before leaving the domain."""
    n, c = _settings(n_paths, cap, config)
    dom = frozenset(domain)
    if x not in dom or y not in dom:
        return _exact(0.0, n, seed, config)
    kernel = CumulativeKernel.of(chain)
    stop = ~chain.mask(dom)
    start, target = chain.index[x], chain.index[y]
    res = merge(run_blocks(n, seed, config, lambda rng, size: run_block(
        kernel, start, stop, c, rng, size, visit=target)))
    return _mean_estimate(res.visits.astype(np.float64), int(res.truncated.sum()), seed,
                          f"G({x},{y})", config)


def estimate_hitting_distribution(
    chain: Chain,
    target: Iterable[str],
    x: str,
    n_paths: int | None = None,
    seed: int = 0,
    cap: int | None = None,
    config: SimulationConfig = DEFAULT_SIMULATION,
) -> Dict[str, SimulationEstimate]:
    """Landing frequencies on each target state; truncated paths land nowhere."""
    n, c = _settings(n_paths, cap, config)
    spec = stopping_spec(chain, target)
    ordered = chain.ordered(spec.target)
    if spec.stops_at(x):
        return {y: _exact(1.0 if y == x else 0.0, n, seed, config) for y in ordered}
    kernel = CumulativeKernel.of(chain)
    stop = chain.mask(spec.target)
    start = chain.index[x]
    res = merge(run_blocks(n, seed, config, lambda rng, size: run_block(kernel, start, stop, c, rng, size)))
    n_trunc = int(res.truncated.sum())
    landed = res.final[~res.truncated]
    counts = np.bincount(landed, minlength=chain.n)
    return {
        y: _proportion_estimate(int(counts[chain.index[y]]), n, n_trunc, seed, f"H({x},{y})", config)
        for y in ordered
    }


def estimate_hitting_time(
    chain: Chain,
    target: Iterable[str],
    x: str,
    n_paths: int | None = None,
    seed: int = 0,
    cap: int | None = None,
    config: SimulationConfig = DEFAULT_SIMULATION,
) -> SimulationEstimate:
    """Sample mean of T_target; a truncated path contributes ``cap``."""
    n, c = _settings(n_paths, cap, config)
    spec = stopping_spec(chain, target)
    if spec.stops_at(x):
        return _exact(0.0, n, seed, config)
    kernel = CumulativeKernel.of(chain)
    stop = chain.mask(spec.target)
    start = chain.index[x]
    res = merge(run_blocks(n, seed, config, lambda rng, size: run_block(kernel, start, stop, c, rng, size)))
    return _mean_estimate(res.steps.astype(np.float64), int(res.truncated.sum()), seed,
                          f"E^{x}[T]", config)


def estimate_excursion_events(
    chain: Chain,
    partition: Partition,
    x: str,
    n_paths: int | None = None,
    seed: int = 0,
    cap: int | None = None,
    config: SimulationConfig = DEFAULT_SIMULATION,
) -> Dict[str, SimulationEstimate]:
    """
    From a in A: ``psi`` = {T_B < T_C}, ``rho`` = {T_B < T*_A < T_C}, where
    T*_A is the first return to A after T_B. From b in B: ``sigma`` and
    ``phi``, the same events with A and B exchanged.
    """
    n, c = _settings(n_paths, cap, config)
    k = partition.labels.get(x)
    if k is Klass.A:
        names, own, other = ("psi", "rho"), partition.A, partition.B
    elif k is Klass.B:
        names, own, other = ("sigma", "phi"), partition.B, partition.A
    else:
        raise PartitionClassError(f"start {x!r} must lie in A or B")
    if not other:
        return {name: _exact(0.0, n, seed, config) for name in names}

    classes = np.zeros(chain.n, dtype=np.int8)
    classes[chain.indices(own)] = 1
    classes[chain.indices(other)] = 2
    kernel = CumulativeKernel.of(chain)
    stop = chain.mask(partition.C)
    start = chain.index[x]
    res = merge(run_blocks(n, seed, config, lambda rng, size: run_block(
        kernel, start, stop, c, rng, size, classes=classes)))
    n_trunc = int(res.truncated.sum())
    return {
        names[0]: _proportion_estimate(int(res.reached_other.sum()), n, n_trunc, seed,
                                       f"{names[0]}({x})", config),
        names[1]: _proportion_estimate(int(res.returned.sum()), n, n_trunc, seed,
                                       f"{names[1]}({x})", config),
    }


def compare(exact: float, estimate: SimulationEstimate, z: float = 3.0,
            config: SimulationConfig = DEFAULT_SIMULATION) -> Verdict:
    """
    ``consistent`` when |exact - mean| <= ci_half_width * z / z_level, with
    z_level the quantile of the estimate's own confidence level;
    ``unreliable`` when too many paths were truncated, whatever the mean.
    """
    if z <= 0:
        raise ValueError("z must be positive")
    if estimate.n_paths and estimate.n_truncated / estimate.n_paths > config.truncation_threshold:
        return Verdict.unreliable
    width = estimate.ci_half_width * z / z_value(estimate.confidence_level)
    if abs(exact - estimate.mean) <= width + EXACT_SLACK:
        return Verdict.consistent
    return Verdict.inconsistent
