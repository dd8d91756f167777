"""
Exact Green's functions, hitting distributions, hitting times and
excursion probabilities of a finite chain.
"""
from .models import ExcursionStats, GreensMatrix, HitTimeVector, HittingDist
from .analysis import (
    excursion_stats,
    expected_hitting_time,
    first_passage_prob,
    greens_function,
    greens_matrix,
    hitting_distribution,
    hitting_distribution_last_exit,
)
from .solver import DomainSolver, ExactAnalyzer, SolverConfig

__all__ = [
    "ExcursionStats",
    "GreensMatrix",
    "HitTimeVector",
    "HittingDist",
    "DomainSolver",
    "ExactAnalyzer",
    "SolverConfig",
    "excursion_stats",
    "expected_hitting_time",
    "first_passage_prob",
    "greens_function",
    "greens_matrix",
    "hitting_distribution",
    "hitting_distribution_last_exit",
]
