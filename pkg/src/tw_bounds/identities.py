"""
Exact identities and intermediate inequalities behind the Green's function
and hitting-time bounds, evaluated on a concrete chain.

Every check compares two numbers computed along different routes (different
domains, different solves), so a passing suite cross-validates the solvers
as well as the decompositions.
"""
from __future__ import annotations

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from tw_chain import Chain, Partition
from tw_exact import (
    ExactAnalyzer,
    excursion_stats,
    expected_hitting_time,
    first_passage_prob,
    greens_matrix,
    hitting_distribution,
    hitting_distribution_last_exit,
)

from .models import DEFAULT_BOUNDS, BoundsConfig, IdentityCheck

log = logging.getLogger(__name__)


class _Checks:
    def __init__(self, config: BoundsConfig):
        self.config = config
        self.out: List[IdentityCheck] = []

    def eq(self, name: str, args: Tuple[str, ...], lhs: float, rhs: float) -> None:
        resid = abs(lhs - rhs)
        tol = self.config.identity * max(1.0, abs(lhs), abs(rhs))
        self.out.append(IdentityCheck(name, args, lhs, rhs, "==", resid, resid <= tol))

    def le(self, name: str, args: Tuple[str, ...], lhs: float, rhs: float) -> None:
        tol = self.config.identity * max(1.0, abs(lhs), abs(rhs))
        self.out.append(IdentityCheck(name, args, lhs, rhs, "<=", lhs - rhs, lhs <= rhs + tol))


def _block(g, rows: Sequence[str], cols: Sequence[str]) -> np.ndarray:
    return np.array([[g.get(r, c) for c in cols] for r in rows]).reshape(len(rows), len(cols))


def _hit_block(chain: Chain, target: Sequence[str], starts: Sequence[str], cols: Sequence[str]) -> np.ndarray:
    """H_target(s, c) for s in starts, c in cols (a subset of target)."""
    table = ExactAnalyzer.of(chain).hitting(target)
    pos = [table.target.index(c) for c in cols]
    out = np.zeros((len(starts), len(cols)))
    for i, s in enumerate(starts):
        row = table.row(s)
        if row is not None:
            out[i] = row[pos]
    return out


def proof_identities(
    chain: Chain,
    partition: Partition,
    config: BoundsConfig = DEFAULT_BOUNDS,
) -> Optional[List[IdentityCheck]]:
    """
    Evaluate the decomposition identities on every admissible argument.
    Returns None (and logs) when |A ∪ B| exceeds ``config.identity_cap``.
    """
    A, B, C, AB = partition.A, partition.B, partition.C, partition.AB
    if len(AB) > config.identity_cap:
        log.info("identity suite skipped: |A ∪ B| = %d > %d", len(AB), config.identity_cap)
        return None

    chk = _Checks(config)
    stats = excursion_stats(chain, partition)
    g_ab = greens_matrix(chain, AB)
    g_a = greens_matrix(chain, A)
    GAB = _block(g_ab, AB, AB)
    pos = {s: i for i, s in enumerate(AB)}
    ia = [pos[a] for a in A]
    ib = [pos[b] for b in B]

    if B:
        g_b = greens_matrix(chain, B)
        h_bc = _hit_block(chain, (*B, *C), A, B)  # H_{B∪C}(a, b)
        h_ac = _hit_block(chain, (*A, *C), B, A)  # H_{A∪C}(b, a)

        # strong Markov at T_B, and its mirror at T_A
        rec_a = _block(g_a, A, A) + h_bc @ GAB[np.ix_(ib, ia)]
        for i, a in enumerate(A):
            for j, a2 in enumerate(A):
                chk.eq("recurrence_at_T_B", (a, a2), GAB[ia[i], ia[j]], rec_a[i, j])
        rec_b = _block(g_b, B, B) + h_ac @ GAB[np.ix_(ia, ib)]
        for i, b in enumerate(B):
            for j, b2 in enumerate(B):
                chk.eq("recurrence_at_T_A", (b, b2), GAB[ib[i], ib[j]], rec_b[i, j])

        # decomposition over the entry point into the other class
        cross_b = h_ac @ GAB[np.ix_(ia, ia)]
        cross_a = h_bc @ GAB[np.ix_(ib, ib)]
        for i, b in enumerate(B):
            for j, a in enumerate(A):
                chk.eq("cross_over_A", (b, a), GAB[ib[i], ia[j]], cross_b[i, j])
                chk.le("cross_bound_sigma", (b, a), GAB[ib[i], ia[j]], stats.sigma[b] * GAB[ia[j], ia[j]])
        for i, a in enumerate(A):
            for j, b in enumerate(B):
                chk.eq("cross_over_B", (a, b), GAB[ia[i], ib[j]], cross_a[i, j])
                chk.le("cross_bound_psi", (a, b), GAB[ia[i], ib[j]], stats.psi[a] * GAB[ib[j], ib[j]])

        for b in B:
            for b2 in B:
                chk.le(
                    "one_excursion_bound_B", (b, b2),
                    GAB[pos[b], pos[b2]], g_b.get(b, b2) + stats.phi[b] * GAB[pos[b2], pos[b2]],
                )
        for b in B:
            if stats.phi[b] < 1.0:
                chk.le("diagonal_bound_B", (b,), GAB[pos[b], pos[b]], g_b.get(b, b) / (1.0 - stats.phi[b]))

    for a in A:
        for a2 in A:
            chk.le(
                "one_excursion_bound_A", (a, a2),
                GAB[pos[a], pos[a2]], g_a.get(a, a2) + stats.rho[a] * GAB[pos[a2], pos[a2]],
            )
        if stats.rho[a] < 1.0:
            chk.le("diagonal_bound_A", (a,), GAB[pos[a], pos[a]], g_a.get(a, a) / (1.0 - stats.rho[a]))

    # G_D(x, y) = P^x(T_y < T_{D^c}) G_D(y, y) on D = A ∪ B
    for x in AB:
        chk.le("visit_floor", (x,), 1.0, GAB[pos[x], pos[x]])
        for y in AB:
            chk.eq(
                "ratio_first_passage", (x, y),
                GAB[pos[x], pos[y]], first_passage_prob(chain, y, AB, x) * GAB[pos[y], pos[y]],
            )

    # last-exit form of H_C, and total mass 1 under absorption
    for x in AB:
        direct = hitting_distribution(chain, C, x)
        last = hitting_distribution_last_exit(chain, C, x)
        for c in C:
            chk.eq("last_exit", (x, c), direct.mass[c], last.mass[c])
        chk.eq("hitting_mass", (x,), direct.total(), 1.0)

    # E^x(T_C) = E^x(T_{exit}) + Σ H_exit(x, z) E^z(T_C), z in the other class
    to_c = expected_hitting_time(chain, C).values
    if B:
        t_b = np.array([to_c[b] for b in B])
        t_a = np.array([to_c[a] for a in A])
        for i, a in enumerate(A):
            chk.eq("hitting_time_split_A", (a,), to_c[a], stats.exit_time[a] + float(h_bc[i] @ t_b))
        for i, b in enumerate(B):
            chk.eq("hitting_time_split_B", (b,), to_c[b], stats.exit_time[b] + float(h_ac[i] @ t_a))
    else:
        for a in A:
            chk.eq("hitting_time_split_A", (a,), to_c[a], stats.exit_time[a])

    failed = [c for c in chk.out if not c.holds]
    if failed:
        log.warning("%d of %d identity checks failed (first: %s %s)",
                    len(failed), len(chk.out), failed[0].name, failed[0].args)
    return chk.out
