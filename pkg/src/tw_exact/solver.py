"""
Factorizations of I - P|_D.

One ``DomainSolver`` per domain D; ``ExactAnalyzer`` caches them (and the
hitting matrices built from them) per chain so that batch reports reuse a
single factorization per domain.
"""
from __future__ import annotations

import logging
import threading
import warnings
import weakref
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Tuple

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from tw_chain import Chain
from tw_chain.errors import DivergentDomainError, SolveError
from tw_chain.graph import leaks_everywhere, reaching_mask

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class HittingTable:
    """
    H_T(x, y) for every x outside T that can reach T, as a dense
    |starts| x |target| array. Starts that cannot reach T are omitted
    (their whole mass is defect).
    """

    target: Tuple[str, ...]
    starts: Tuple[str, ...]
    matrix: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "_rows", {s: i for i, s in enumerate(self.starts)})

    def row(self, x: str) -> np.ndarray | None:
        i = self._rows.get(x)
        return None if i is None else self.matrix[i]


@dataclass(frozen=True)
class SolverConfig:
    # Domains up to this size are factorized densely; larger ones with SuperLU.
    dense_threshold: int = 2000
    # Normwise backward error allowed: |Ax - b| <= tol (|A| |x| + |b|), infinity norms.
    residual_tol: float = 1e-8


DEFAULT_SOLVER = SolverConfig()


class DomainSolver:
    """
    LU factorization of (I - P|_D) for a domain D whose every state has a
    support path out of D (so the Neumann series converges).
    """

    def __init__(self, chain: Chain, domain: np.ndarray, config: SolverConfig = DEFAULT_SOLVER):
        self.chain = chain
        self.idx = np.asarray(domain, dtype=np.intp)
        self.states = tuple(chain.states[i] for i in self.idx)
        self.pos = {s: k for k, s in enumerate(self.states)}
        self.config = config
        m = self.idx.size

        if m == chain.n:
            raise DivergentDomainError("domain is the whole state space; the walk never leaves it")
        mask = np.zeros(chain.n, dtype=bool)
        mask[self.idx] = True
        stuck = mask & ~leaks_everywhere(chain.transition, mask)
        if stuck.any():
            names = [chain.states[i] for i in np.nonzero(stuck)[0]]
            raise DivergentDomainError(
                f"no escape from the domain for {len(names)} state(s): {', '.join(names[:10])}"
            )

        sub = chain.transition[self.idx][:, self.idx]
        self.system = (sp.identity(m, format="csc") - sub).tocsc()
        absolute = abs(self.system)
        self._norm = float(absolute.sum(axis=1).max()) if m else 0.0
        self._norm_t = float(absolute.sum(axis=0).max()) if m else 0.0
        self._dense = m <= config.dense_threshold
        if m == 0:
            self._lu = None
        elif self._dense:
            with warnings.catch_warnings():
                warnings.simplefilter("error", la.LinAlgWarning)
                try:
                    self._lu = la.lu_factor(self.system.toarray(), check_finite=True)
                except (la.LinAlgError, la.LinAlgWarning, ValueError) as exc:
                    raise SolveError(f"dense factorization failed on a {m}-state domain: {exc}") from exc
        else:
            try:
                self._lu = splu(self.system)
            except RuntimeError as exc:
                raise SolveError(f"sparse factorization failed on a {m}-state domain: {exc}") from exc
        log.debug("factorized %s domain of %d states", "dense" if self._dense else "sparse", m)

    @property
    def size(self) -> int:
        return self.idx.size

    def solve(self, rhs: np.ndarray, transpose: bool = False) -> np.ndarray:
        """Solve (I - P|_D) x = rhs, or its transpose."""
        rhs = np.asarray(rhs, dtype=np.float64)
        if self.size == 0:
            return np.zeros_like(rhs)
        if self._dense:
            x = la.lu_solve(self._lu, rhs, trans=1 if transpose else 0)
        else:
            x = self._lu.solve(rhs, trans="T" if transpose else "N")
        if not np.all(np.isfinite(x)):
            raise SolveError("solution contains non-finite values")
        if not rhs.size:
            return x
        system = self.system.T if transpose else self.system
        resid = float(np.max(np.abs(system @ x - rhs)))
        norm_a = self._norm_t if transpose else self._norm
        scale = norm_a * float(np.max(np.abs(x))) + float(np.max(np.abs(rhs)))
        if resid > self.config.residual_tol * scale:
            raise SolveError(
                f"backward error {resid / scale:.3e} exceeds tolerance on a {self.size}-state domain"
            )
        return x


class ExactAnalyzer:
    """Per-chain cache of domain factorizations and hitting matrices."""

    _registry: "weakref.WeakKeyDictionary[Chain, ExactAnalyzer]" = weakref.WeakKeyDictionary()
    _registry_lock = threading.Lock()

    def __init__(self, chain: Chain, config: SolverConfig = DEFAULT_SOLVER):
        self.chain = chain
        self.config = config
        self._lock = threading.RLock()
        self._solvers: Dict[FrozenSet[str], DomainSolver] = {}
        self._hitting: Dict[FrozenSet[str], HittingTable] = {}
        self._columns: Dict[Tuple[FrozenSet[str], str], np.ndarray] = {}

    @classmethod
    def of(cls, chain: Chain) -> "ExactAnalyzer":
        with cls._registry_lock:
            found = cls._registry.get(chain)
            if found is None:
                found = cls(chain)
                cls._registry[chain] = found
            return found

    def solver(self, domain: Iterable[str]) -> DomainSolver:
        key = frozenset(domain)
        with self._lock:
            found = self._solvers.get(key)
            if found is None:
                found = DomainSolver(self.chain, self.chain.indices(key), self.config)
                self._solvers[key] = found
            return found

    def green_column(self, domain: Iterable[str], y: str) -> np.ndarray:
        """G_D(., y) over the domain's states (domain order)."""
        s = self.solver(domain)
        key = (frozenset(s.states), y)
        with self._lock:
            col = self._columns.get(key)
        if col is None:
            rhs = np.zeros(s.size)
            rhs[s.pos[y]] = 1.0
            col = s.solve(rhs)
            col.setflags(write=False)
            with self._lock:
                self._columns[key] = col
        return col

    def green_row(self, domain: Iterable[str], x: str) -> np.ndarray:
        """G_D(x, .) over the domain's states, via the transposed system."""
        s = self.solver(domain)
        rhs = np.zeros(s.size)
        rhs[s.pos[x]] = 1.0
        return s.solve(rhs, transpose=True)

    def green_matrix(self, domain: Iterable[str]) -> Tuple[Tuple[str, ...], np.ndarray]:
        s = self.solver(domain)
        return s.states, s.solve(np.eye(s.size))

    def hitting(self, target: Iterable[str]) -> HittingTable:
        """
        Hitting matrix of ``target`` from every start that can reach it.

        Only starts with a support path to the target enter the linear
        system, so the restricted I - P is always nonsingular; the others
        keep their mass as defect.
        """
        key = frozenset(target)
        with self._lock:
            found = self._hitting.get(key)
        if found is not None:
            return found

        chain = self.chain
        tmask = chain.mask(key)
        reach = reaching_mask(chain.transition, ~tmask, tmask)
        starts = np.nonzero(reach)[0]
        tidx = np.nonzero(tmask)[0]
        if starts.size:
            solver = self.solver(chain.states[i] for i in starts)
            rhs = chain.transition[solver.idx][:, tidx].toarray()
            matrix = solver.solve(rhs)
            starts_states = solver.states
        else:
            matrix = np.zeros((0, tidx.size))
            starts_states = ()
        matrix = np.clip(matrix, 0.0, 1.0)
        matrix.setflags(write=False)
        table = HittingTable(
            target=tuple(chain.states[i] for i in tidx),
            starts=starts_states,
            matrix=matrix,
        )
        with self._lock:
            self._hitting[key] = table
        return table
