"""
Generators of chain + partition families for tests and experiments.
"""
from .models import GridSpec
from .families import (
    grid_annulus,
    path_chain,
    punctured_annulus,
    random_chain,
    ring_order,
    triad,
)

__all__ = [
    "GridSpec",
    "grid_annulus",
    "path_chain",
    "punctured_annulus",
    "random_chain",
    "ring_order",
    "triad",
]
