"""Diameter-lexicographic filtrations of Rips complexes."""

from enum import Enum
from typing import Iterator, Optional

from complexes.rips import SimplicialComplex, dump_complex
from complexes.simplex import Simplex, VertexOrder
from metric.values import Distance


class SimplexOrdering(str, Enum):
    """Tie-break among simplices of equal diameter and dimension."""

    LEX = "lex"
    REVERSE_COLEX = "reverse-colex"


class Comparison(str, Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"


class Filtration:
    """A complex with simplices sorted by (diameter, dimension, vertex order).

    `ordering="reverse-colex"` compares equal-diameter, equal-dimension
    simplices reverse-colexicographically instead; under a reversed vertex
    order this coincides with the lexicographic comparison.
    """

    def __init__(
        self,
        complex_: SimplicialComplex,
        order: Optional[VertexOrder] = None,
        ordering: SimplexOrdering | str = SimplexOrdering.LEX,
    ):
        self.complex = complex_
        self.space = complex_.space
        self.order = order or VertexOrder.identity(self.space.n)
        self.ordering = SimplexOrdering(ordering)
        tie = self.order.lex_key if self.ordering is SimplexOrdering.LEX else self.order.reverse_colex_key
        self._tie = tie
        self._levels = {s: self.space.diameter_level(s) for s in complex_.simplices}
        self.simplices: list[Simplex] = sorted(complex_.simplices, key=self.key)
        self.position: dict[Simplex, int] = {s: k for k, s in enumerate(self.simplices)}

    def __len__(self) -> int:
        return len(self.simplices)

    def __iter__(self) -> Iterator[Simplex]:
        return iter(self.simplices)

    def __contains__(self, sigma: object) -> bool:
        return sigma in self.position

    def key(self, sigma: Simplex) -> tuple:
        return (self.level(sigma), len(sigma), self._tie(sigma))

    def level(self, sigma: Simplex) -> int:
        cached = self._levels.get(sigma)
        return cached if cached is not None else self.space.diameter_level(sigma)

    def diameter(self, sigma: Simplex) -> Distance:
        return self.space.levels[self.level(sigma)]

    def compare(self, sigma: Simplex, tau: Simplex) -> Comparison:
        a, b = self.key(sigma), self.key(tau)
        if a < b:
            return Comparison.LESS
        if a > b:
            return Comparison.GREATER
        return Comparison.EQUAL

    def dump(self) -> str:
        return dump_complex(self.complex, order_key=self.key)

    def with_order(self, order: VertexOrder, ordering: Optional[SimplexOrdering | str] = None) -> "Filtration":
        return Filtration(self.complex, order, ordering or self.ordering)


def diam_lex_compare(sigma: Simplex, tau: Simplex, filtration: Filtration) -> Comparison:
    """Total order of the filtration; EQUAL only for identical simplices."""
    return filtration.compare(sigma, tau)
