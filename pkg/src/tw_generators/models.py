"""
Data models for chain generators.
"""
from __future__ import annotations

from dataclasses import dataclass

from tw_chain.errors import GeometryError


@dataclass(frozen=True)
class GridSpec:
    """
    width x height grid with a Chebyshev-distance annulus around the center:
    cells with d < inner_radius form A, inner_radius <= d < outer_radius
    form C, the rest B.
    """

    width: int
    height: int
    laziness: float = 0.0
    inner_radius: int = 1
    outer_radius: int = 2

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise GeometryError(f"grid must be at least 1x1, got {self.width}x{self.height}")
        if not 0.0 <= self.laziness < 1.0:
            raise GeometryError(f"laziness must lie in [0, 1), got {self.laziness}")
        if not 0 < self.inner_radius < self.outer_radius:
            raise GeometryError("radii must satisfy 0 < inner_radius < outer_radius")
        if 2 * self.outer_radius >= min(self.width, self.height):
            raise GeometryError("outer_radius must be < min(width, height) / 2")

    @property
    def center(self) -> tuple[int, int]:
        return (self.height - 1) // 2, (self.width - 1) // 2

    def distance(self, row: int, col: int) -> int:
        cy, cx = self.center
        return max(abs(row - cy), abs(col - cx))

    @staticmethod
    def label(row: int, col: int) -> str:
        return f"g{row}_{col}"
