"""
Exact analysis of a finite chain by linear solves.

Every quantity is a solve against a factorization of I - P|_D cached on the
chain's ``ExactAnalyzer``; batch callers therefore pay one factorization per
domain, whatever the number of entries they read.
"""
from __future__ import annotations

import logging
from typing import Iterable

import numpy as np

from tw_chain import Chain, Partition, stopping_spec, validate_absorption
from tw_chain.errors import NotAbsorbingError, SubsetError

from .models import ExcursionStats, GreensMatrix, HitTimeVector, HittingDist
from .solver import ExactAnalyzer

log = logging.getLogger(__name__)

# Masses within this distance of [0, 1] are clamped rather than reported.
MASS_TOL = 1e-12


def _domain(chain: Chain, domain: Iterable[str]) -> frozenset[str]:
    dom = frozenset(domain)
    unknown = dom - set(chain.states)
    if unknown:
        raise SubsetError(f"domain states not in the chain: {', '.join(sorted(unknown))}")
    return dom


def greens_function(chain: Chain, domain: Iterable[str], x: str, y: str) -> float:
    """
    G_D(x, y) = sum over j >= 0 of P^x(S_j = y, j < T_{D^c}).

    Zero by definition when x or y lies outside D.
    """
    dom = _domain(chain, domain)
    if x not in dom or y not in dom:
        return 0.0
    an = ExactAnalyzer.of(chain)
    col = an.green_column(dom, y)
    return float(col[an.solver(dom).pos[x]])


def greens_matrix(chain: Chain, domain: Iterable[str]) -> GreensMatrix:
    """All of G_D from a single factorization."""
    dom = _domain(chain, domain)
    states, values = ExactAnalyzer.of(chain).green_matrix(dom)
    values.setflags(write=False)
    return GreensMatrix(domain=states, values=values)


def _dist(start: str, target: tuple[str, ...], row: np.ndarray | None) -> HittingDist:
    if row is None:
        return HittingDist(start=start, target=target, mass={y: 0.0 for y in target}, defect=1.0)
    mass = {y: float(v) for y, v in zip(target, row)}
    defect = 1.0 - float(np.sum(row))
    if -MASS_TOL <= defect < 0.0 or 0.0 < defect <= MASS_TOL:
        defect = 0.0
    return HittingDist(start=start, target=target, mass=mass, defect=defect)


def hitting_distribution(chain: Chain, target: Iterable[str], x: str) -> HittingDist:
    """
    H_T(x, y) = P^x(S_{T_T} = y).

    A start inside T is a point mass at itself. Mass that never reaches T is
    reported as ``defect`` instead of raising.
    """
    spec = stopping_spec(chain, target)
    ordered = chain.ordered(spec.target)
    if spec.stops_at(x):
        return HittingDist(
            start=x,
            target=ordered,
            mass={y: (1.0 if y == x else 0.0) for y in ordered},
            defect=0.0,
        )
    table = ExactAnalyzer.of(chain).hitting(spec.target)
    return _dist(x, table.target, table.row(x))


def hitting_distribution_last_exit(chain: Chain, target: Iterable[str], x: str) -> HittingDist:
    """
    H_T(x, y) = sum over z outside T of G_{T^c}(x, z) p_1(z, y).

    Independent of ``hitting_distribution``: one transposed solve for the
    Green row of x, then one kernel step into T.
    """
    spec = stopping_spec(chain, target)
    if spec.stops_at(x):
        raise SubsetError(f"start {x!r} lies in the target; the last-exit form needs x outside it")
    an = ExactAnalyzer.of(chain)
    outside = frozenset(chain.states) - spec.target
    solver = an.solver(outside)
    g_row = an.green_row(outside, x)
    tidx = chain.indices(spec.target)
    step = chain.transition[solver.idx][:, tidx]
    row = np.asarray(step.T @ g_row).ravel()
    return _dist(x, chain.ordered(spec.target), np.clip(row, 0.0, 1.0))


def expected_hitting_time(chain: Chain, target: Iterable[str]) -> HitTimeVector:
    """
    E^x[T_T] for every state: solves (I - P|_{T^c}) h = 1, zero on T.

    Raises DivergentDomainError when some state outside T cannot reach it.
    """
    spec = stopping_spec(chain, target)
    outside = frozenset(chain.states) - spec.target
    values = {s: 0.0 for s in chain.states}
    if outside:
        solver = ExactAnalyzer.of(chain).solver(outside)
        h = solver.solve(np.ones(solver.size))
        for s, v in zip(solver.states, h):
            values[s] = float(max(v, 0.0))
    return HitTimeVector(target=spec.target, values=values)


def first_passage_prob(chain: Chain, y: str, domain: Iterable[str], x: str) -> float:
    """P^x(T_y < T_{D^c}) for x, y in D; 1 when x == y."""
    dom = _domain(chain, domain)
    if x not in dom or y not in dom:
        raise SubsetError(f"both {x!r} and {y!r} must lie in the domain")
    if x == y:
        return 1.0
    target = (frozenset(chain.states) - dom) | {y}
    table = ExactAnalyzer.of(chain).hitting(target)
    row = table.row(x)
    if row is None:
        return 0.0
    return float(row[table.target.index(y)])


def excursion_stats(chain: Chain, partition: Partition) -> ExcursionStats:
    """
    ψ_a = P^a(T_B < T_C), σ_b = P^b(T_A < T_C), ρ_a = Σ_b' H_{B∪C}(a, b') σ_b',
    φ_b = Σ_a' H_{A∪C}(b, a') ψ_a', their suprema, and
    f_A = max_a E^a(T_{B∪C}), f_B = max_b E^b(T_{A∪C}).

    With B empty: ψ = ρ = 0, σ and φ are empty and f_B = 0.
    """
    report = validate_absorption(chain, partition)
    if not report.ok:
        raise NotAbsorbingError(
            "C is unreachable from: " + ", ".join(report.offending_states[:10])
        )

    an = ExactAnalyzer.of(chain)
    P = chain.transition
    a_idx = chain.indices(partition.A)
    b_idx = chain.indices(partition.B)

    sa = an.solver(partition.A)
    exit_a = sa.solve(np.ones(sa.size))
    if b_idx.size:
        sb = an.solver(partition.B)
        p_ab = P[a_idx][:, b_idx]
        p_ba = P[b_idx][:, a_idx]
        psi = np.clip(sa.solve(np.asarray(p_ab.sum(axis=1)).ravel()), 0.0, 1.0)
        sigma = np.clip(sb.solve(np.asarray(p_ba.sum(axis=1)).ravel()), 0.0, 1.0)
        rho = np.clip(sa.solve(p_ab @ sigma), 0.0, 1.0)
        phi = np.clip(sb.solve(p_ba @ psi), 0.0, 1.0)
        exit_b = sb.solve(np.ones(sb.size))
    else:
        psi = np.zeros(a_idx.size)
        rho = np.zeros(a_idx.size)
        sigma = phi = exit_b = np.zeros(0)

    exit_time = {s: float(v) for s, v in zip(sa.states, exit_a)}
    if b_idx.size:
        exit_time.update({s: float(v) for s, v in zip(sb.states, exit_b)})

    stats = ExcursionStats(
        psi=dict(zip(sa.states, map(float, psi))),
        sigma=dict(zip(partition.B, map(float, sigma))) if b_idx.size else {},
        rho=dict(zip(sa.states, map(float, rho))),
        phi=dict(zip(partition.B, map(float, phi))) if b_idx.size else {},
        psi_sup=float(psi.max()) if psi.size else 0.0,
        sigma_sup=float(sigma.max()) if sigma.size else 0.0,
        f_A=float(exit_a.max()),
        f_B=float(exit_b.max()) if exit_b.size else 0.0,
        exit_time=exit_time,
    )
    log.debug("excursion stats: psi=%.6g sigma=%.6g f_A=%.6g f_B=%.6g",
              stats.psi_sup, stats.sigma_sup, stats.f_A, stats.f_B)
    return stats
