"""Simplices as sorted vertex tuples, and total vertex orders."""

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

# Strictly increasing vertex indices; the vertex order only enters comparisons.
Simplex = tuple[int, ...]


def simplex(vertices: Iterable[int]) -> Simplex:
    """Canonical simplex from any vertex collection."""
    result = tuple(sorted(set(vertices)))
    if not result:
        raise ValueError("a simplex needs at least one vertex")
    return result


def dimension(sigma: Simplex) -> int:
    return len(sigma) - 1


def facets(sigma: Simplex) -> list[Simplex]:
    """All codimension-one faces; empty for a vertex."""
    if len(sigma) < 2:
        return []
    return list(combinations(sigma, len(sigma) - 1))


def is_face(sigma: Simplex, tau: Simplex) -> bool:
    return set(sigma) <= set(tau)


def is_facet(sigma: Simplex, tau: Simplex) -> bool:
    return len(sigma) + 1 == len(tau) and is_face(sigma, tau)


def add_vertex(sigma: Simplex, v: int) -> Simplex:
    return tuple(sorted(sigma + (v,)))


def remove_vertex(sigma: Simplex, v: int) -> Simplex:
    return tuple(w for w in sigma if w != v)


def closure(simplices: Iterable[Simplex]) -> set[Simplex]:
    """All nonempty faces of the given simplices."""
    result: set[Simplex] = set()
    for sigma in simplices:
        for k in range(1, len(sigma) + 1):
            result.update(combinations(sigma, k))
    return result


@dataclass(frozen=True)
class VertexOrder:
    """Total order on vertices 0..n-1; `sequence[k]` is the vertex of rank k."""

    sequence: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.sequence) != list(range(len(self.sequence))):
            raise ValueError(f"not a permutation of 0..{len(self.sequence) - 1}: {self.sequence}")
        object.__setattr__(self, "_rank", {v: k for k, v in enumerate(self.sequence)})

    @classmethod
    def identity(cls, n: int) -> "VertexOrder":
        return cls(tuple(range(n)))

    @classmethod
    def from_sequence(cls, vertices: Sequence[int]) -> "VertexOrder":
        return cls(tuple(vertices))

    @property
    def n(self) -> int:
        return len(self.sequence)

    def rank(self, v: int) -> int:
        return self._rank[v]  # type: ignore[attr-defined]

    def reversed(self) -> "VertexOrder":
        return VertexOrder(tuple(reversed(self.sequence)))

    def min_vertex(self, vertices: Iterable[int]) -> int:
        return min(vertices, key=self.rank)

    def lex_key(self, sigma: Simplex) -> tuple[int, ...]:
        """Lexicographic key: ranks in ascending order."""
        return tuple(sorted(self.rank(v) for v in sigma))

    def reverse_colex_key(self, sigma: Simplex) -> tuple[int, ...]:
        """Reverse colexicographic key: negated ranks, largest rank first."""
        return tuple(-r for r in sorted((self.rank(v) for v in sigma), reverse=True))
