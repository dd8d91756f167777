"""
Support-graph reachability on a chain.

Everything here looks only at which transitions have positive probability,
never at their values.
"""
from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import breadth_first_order


def reaching_mask(transition: sp.csr_matrix, domain: np.ndarray, target: np.ndarray) -> np.ndarray:
    """
    Boolean mask of the domain states that can reach ``target`` along a support
    path whose intermediate states all lie in ``domain``.

    ``domain`` and ``target`` are boolean masks over the chain's states and
    must be disjoint.
    """
    n = transition.shape[0]
    coo = transition.tocoo()
    keep = domain[coo.row] & (coo.data > 0) & (domain[coo.col] | target[coo.col])
    src = coo.row[keep]
    dst = coo.col[keep]
    # every target state is collapsed onto one sink node n; edges are reversed
    dst = np.where(target[dst], n, dst)
    rev = sp.csr_matrix(
        (np.ones(src.size), (dst, src)),
        shape=(n + 1, n + 1),
    )
    order = breadth_first_order(rev, n, directed=True, return_predecessors=False)
    out = np.zeros(n, dtype=bool)
    out[order[order < n]] = True
    return out & domain


def leaks_everywhere(transition: sp.csr_matrix, domain: np.ndarray) -> np.ndarray:
    """Domain states with a support path out of the domain (mask)."""
    return reaching_mask(transition, domain, ~domain)
