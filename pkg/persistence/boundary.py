"""Sparse Z/2 boundary matrix over a filtration (columns store only their ones)."""

from dataclasses import dataclass
from typing import Optional

from complexes.filtration import Filtration
from complexes.simplex import Simplex, facets


@dataclass
class BoundaryMatrix:
    simplices: list[Simplex]
    columns: dict[int, set[int]]  # col j -> rows i with B[i, j] == 1

    @property
    def size(self) -> int:
        return len(self.simplices)

    @classmethod
    def from_filtration(cls, filtration: Filtration) -> "BoundaryMatrix":
        index_of = filtration.position
        cols: dict[int, set[int]] = {}
        for col, sigma in enumerate(filtration.simplices):
            rows = {index_of[face] for face in facets(sigma)}
            if rows:
                cols[col] = rows
        return cls(list(filtration.simplices), cols)

    def boundary(self, col: int) -> set[int]:
        return set(self.columns.get(col, ()))

    def dimension(self, col: int) -> int:
        return len(self.simplices[col]) - 1


def lowest_one(column: set[int]) -> Optional[int]:
    return max(column) if column else None


def add_into(target: set[int], source: set[int]) -> None:
    """target += source over Z/2."""
    target ^= source
