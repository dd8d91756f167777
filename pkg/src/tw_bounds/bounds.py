"""
Evaluation of the Green's function, hitting-time and separation bounds for
a walk on A ⊔ B ⊔ C, each against the exact value.
"""
from __future__ import annotations

import logging
import math
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from tw_chain import Chain, Klass, Partition
from tw_chain.errors import CapExceededError, PartitionClassError, SubsetError
from tw_exact import (
    ExcursionStats,
    excursion_stats,
    expected_hitting_time,
    greens_function,
    hitting_distribution,
)

from .models import (
    DEFAULT_BOUNDS,
    BoundReport,
    BoundsConfig,
    ClassPair,
    FullReport,
    MonotonicityReport,
    SeparationReport,
)

log = logging.getLogger(__name__)

GREEN = "G_AuB"
HIT_TIME = "E[T_C]"


def _ratio(num: float, den: float, config: BoundsConfig) -> float:
    """num / den, or +inf when the denominator vanishes."""
    if den <= config.vacuity:
        return math.inf
    return num / den


def _require(partition: Partition, state: str, allowed: Sequence[Klass], role: str) -> Klass:
    k = partition.labels.get(state)
    if k is None:
        raise PartitionClassError(f"{role} {state!r} is not a state of the chain")
    if k not in allowed:
        names = "/".join(a.value for a in allowed)
        raise PartitionClassError(f"{role} {state!r} is in {k.value}, expected {names}")
    return k


def greens_bounds(
    chain: Chain,
    partition: Partition,
    x: str,
    y: str,
    config: BoundsConfig = DEFAULT_BOUNDS,
    stats: Optional[ExcursionStats] = None,
) -> BoundReport:
    """
    Bounds on G_{A∪B}(x, y) by the class of (x, y):

    * (a, a'): G_A(a, a') <= . <= G_A(a, a') + ρ_a / (1 - ρ_a') G_A(a', a')
    * (b, b'): same with B, φ
    * (a, b):  0 <= . <= ψ_a / (1 - φ_b) G_B(b, b)
    * (b, a):  0 <= . <= σ_b / (1 - ρ_a) G_A(a, a), the (a, b) bound with A and B exchanged

    The cross bound keeps only the branch that bounds its own orientation;
    min{σ_b / (1 - ρ_a) G_A(a, a), ψ_a / (1 - φ_b) G_B(b, b)} fails on chains
    where G(a, b) != G(b, a).
    """
    kx = _require(partition, x, (Klass.A, Klass.B), "x")
    ky = _require(partition, y, (Klass.A, Klass.B), "y")
    stats = stats or excursion_stats(chain, partition)
    A, B, AB = partition.A, partition.B, partition.AB
    exact = greens_function(chain, AB, x, y)

    if kx is Klass.A and ky is Klass.A:
        g = greens_function(chain, A, x, y)
        upper = g + _ratio(stats.rho[x], 1.0 - stats.rho[y], config) * greens_function(chain, A, y, y)
        return BoundReport.evaluate(GREEN, ClassPair.AA, x, y, g, exact, upper, config)

    if kx is Klass.B and ky is Klass.B:
        g = greens_function(chain, B, x, y)
        upper = g + _ratio(stats.phi[x], 1.0 - stats.phi[y], config) * greens_function(chain, B, y, y)
        return BoundReport.evaluate(GREEN, ClassPair.BB, x, y, g, exact, upper, config)

    if kx is Klass.A:
        a, b = x, y
        upper = _ratio(stats.psi[a], 1.0 - stats.phi[b], config) * greens_function(chain, B, b, b)
        return BoundReport.evaluate(GREEN, ClassPair.AB, x, y, 0.0, exact, upper, config)
    b, a = x, y
    upper = _ratio(stats.sigma[b], 1.0 - stats.rho[a], config) * greens_function(chain, A, a, a)
    return BoundReport.evaluate(GREEN, ClassPair.BA, x, y, 0.0, exact, upper, config, mirrored=True)


def hitting_time_bounds(
    chain: Chain,
    partition: Partition,
    x: str,
    config: BoundsConfig = DEFAULT_BOUNDS,
    stats: Optional[ExcursionStats] = None,
    to_c: Optional[dict] = None,
) -> BoundReport:
    """
    E^a(T_{B∪C}) <= E^a(T_C) <= E^a(T_{B∪C}) + ψ_a (f_B + σ f_A) / (1 - ψσ),
    and the mirrored statement for x in B. Vacuous when ψσ >= 1 - vacuity.
    """
    kx = _require(partition, x, (Klass.A, Klass.B), "x")
    stats = stats or excursion_stats(chain, partition)
    exact = (to_c or expected_hitting_time(chain, partition.C).values)[x]
    lower = stats.exit_time[x]
    psi, sigma = stats.psi_sup, stats.sigma_sup
    den = 1.0 - psi * sigma
    if kx is Klass.A:
        num = stats.psi[x] * (stats.f_B + sigma * stats.f_A)
        pair = ClassPair.A
    else:
        num = stats.sigma[x] * (stats.f_A + psi * stats.f_B)
        pair = ClassPair.B
    upper = lower + _ratio(num, den, config)
    return BoundReport.evaluate(HIT_TIME, pair, x, None, lower, exact, upper, config)


def _separation(
    chain: Chain,
    partition: Partition,
    start: str,
    c: str,
    other: Klass,
    bound: float,
    config: BoundsConfig,
) -> SeparationReport:
    C = partition.C
    avoid = partition.A if other is Klass.A else partition.B
    h_c = hitting_distribution(chain, C, start).mass[c]
    h_ca = hitting_distribution(chain, (*C, *avoid), start).mass[c]
    p = h_c - h_ca
    holds = -config.probability <= p <= bound + config.noise
    if not holds:
        log.warning("separation bound fails at (%s, %s): p=%.17g bound=%.17g", start, c, p, bound)
    return SeparationReport(
        b=start, c=c, h_C=h_c, h_CA=h_ca, defect_p=p, bound=bound, other=other, holds=holds,
    )


def separation_defect(
    chain: Chain,
    partition: Partition,
    b: str,
    c: str,
    config: BoundsConfig = DEFAULT_BOUNDS,
    stats: Optional[ExcursionStats] = None,
) -> SeparationReport:
    """p(b, c, C, A) = H_C(b, c) - H_{C∪A}(b, c), with 0 <= p <= σ_b."""
    _require(partition, b, (Klass.B,), "b")
    _require(partition, c, (Klass.C,), "c")
    stats = stats or excursion_stats(chain, partition)
    return _separation(chain, partition, b, c, Klass.A, stats.sigma[b], config)


def separation_defect_from_a(
    chain: Chain,
    partition: Partition,
    a: str,
    c: str,
    config: BoundsConfig = DEFAULT_BOUNDS,
    stats: Optional[ExcursionStats] = None,
) -> SeparationReport:
    """Mirrored form: p(a, c, C, B) = H_C(a, c) - H_{C∪B}(a, c), with 0 <= p <= ψ_a."""
    _require(partition, a, (Klass.A,), "a")
    _require(partition, c, (Klass.C,), "c")
    stats = stats or excursion_stats(chain, partition)
    return _separation(chain, partition, a, c, Klass.B, stats.psi[a], config)


def monotonicity_check(
    chain: Chain,
    inner: Iterable[str],
    outer: Iterable[str],
    x: str,
    y: str,
    config: BoundsConfig = DEFAULT_BOUNDS,
) -> MonotonicityReport:
    """
    For inner ⊆ outer:

    * x, y in inner: G_inner(x, y) <= G_outer(x, y);
    * y in inner, x outside outer: H_inner(x, y) >= H_outer(x, y), together
      with P^x(T_inner = T_outer) = Σ_{z in inner} H_outer(x, z) and
      P^x(T_inner != T_outer) = Σ_{z in outer \\ inner} H_outer(x, z).
    """
    inner_set, outer_set = frozenset(inner), frozenset(outer)
    if not inner_set <= outer_set:
        extra = ", ".join(sorted(inner_set - outer_set))
        raise SubsetError(f"inner set is not contained in the outer set (extra: {extra})")

    if x in inner_set and y in inner_set:
        g_in = greens_function(chain, inner_set, x, y)
        g_out = greens_function(chain, outer_set, x, y)
        tol = config.identity * max(1.0, abs(g_out))
        return MonotonicityReport(
            kind="green", x=x, y=y, inner_value=g_in, outer_value=g_out, ordered=g_in <= g_out + tol,
        )

    if y in inner_set and x not in outer_set:
        h_in = hitting_distribution(chain, inner_set, x).mass[y]
        h_out_dist = hitting_distribution(chain, outer_set, x)
        h_out = h_out_dist.mass[y]
        p_same = sum(v for z, v in h_out_dist.mass.items() if z in inner_set)
        p_diff = sum(v for z, v in h_out_dist.mass.items() if z not in inner_set)
        defect = 1.0 - p_same - p_diff
        if abs(defect) <= config.vacuity:
            defect = 0.0
        return MonotonicityReport(
            kind="hitting",
            x=x,
            y=y,
            inner_value=h_in,
            outer_value=h_out,
            ordered=h_in + config.identity >= h_out,
            p_same=p_same,
            p_diff=p_diff,
            transience_defect=defect,
        )

    raise SubsetError(
        f"({x!r}, {y!r}) fits neither case: need x, y in inner, or y in inner and x outside outer"
    )


def _pick(total: int, sample: Optional[int], rng: np.random.Generator) -> np.ndarray:
    """Sorted positions of a deterministic sample (all positions when sample is None)."""
    if sample is None or sample >= total:
        return np.arange(total)
    return np.sort(rng.choice(total, size=sample, replace=False))


def _green_pairs(partition: Partition) -> List[Tuple[Tuple[str, ...], Tuple[str, ...]]]:
    A, B = partition.A, partition.B
    return [(A, A), (B, B), (A, B), (B, A)]


def _iter_green(partition: Partition, sample: Optional[int], rng: np.random.Generator) -> Iterator[Tuple[str, str]]:
    blocks = _green_pairs(partition)
    sizes = [len(r) * len(c) for r, c in blocks]
    offsets = np.cumsum([0, *sizes])
    for k in _pick(int(offsets[-1]), sample, rng):
        blk = int(np.searchsorted(offsets, k, side="right")) - 1
        rows, cols = blocks[blk]
        local = int(k - offsets[blk])
        yield rows[local // len(cols)], cols[local % len(cols)]


def full_report(
    chain: Chain,
    partition: Partition,
    config: BoundsConfig = DEFAULT_BOUNDS,
    sample_pairs: Optional[int] = None,
    seed: int = 0,
) -> FullReport:
    """
    Every admissible Green, hitting-time and separation report, in the
    order Green (A,A), (B,B), (A,B), (B,A); hitting time over A ∪ B; then
    separation over B x C, each lexicographic in state order.

    ``sample_pairs`` keeps a deterministic subset of at most that many rows
    per section (order preserved); the |A ∪ B| cap applies only to the
    unsampled report.
    """
    if sample_pairs is None and len(partition.AB) > config.report_cap:
        raise CapExceededError(
            f"|A ∪ B| = {len(partition.AB)} exceeds the report cap {config.report_cap}"
        )
    rng = np.random.default_rng(seed)
    stats = excursion_stats(chain, partition)

    green = [
        greens_bounds(chain, partition, x, y, config, stats=stats)
        for x, y in _iter_green(partition, sample_pairs, rng)
    ]

    to_c = expected_hitting_time(chain, partition.C).values
    AB = partition.AB
    hitting = [
        hitting_time_bounds(chain, partition, AB[i], config, stats=stats, to_c=to_c)
        for i in _pick(len(AB), sample_pairs, rng)
    ]

    B, C = partition.B, partition.C
    separation = [
        separation_defect(chain, partition, B[k // len(C)], C[k % len(C)], config, stats=stats)
        for k in _pick(len(B) * len(C), sample_pairs, rng)
    ]
    log.info("full report: %d green, %d hitting-time, %d separation rows",
             len(green), len(hitting), len(separation))
    return FullReport(green=green, hitting=hitting, separation=separation)
