"""Discrete gradients as interval families, and facet-pair matchings."""

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Callable, Iterable, Iterator, Optional

from complexes.simplex import Simplex, VertexOrder, add_vertex, is_facet
from errors import GradientError
from logging_config import get_logger
from metric.space import FiniteMetricSpace

logger = get_logger(__name__)


def _label(sigma: Simplex, names: Optional[tuple[str, ...]]) -> str:
    if names is None:
        return " ".join(str(v) for v in sigma)
    return " ".join(names[v] for v in sigma)


@dataclass(frozen=True, order=True)
class GradientInterval:
    """Regular interval [rho, phi] = {psi : rho <= psi <= phi} of the face poset."""

    rho: Simplex
    phi: Simplex

    def __post_init__(self) -> None:
        if not set(self.rho) < set(self.phi):
            raise GradientError(f"[{self.rho}, {self.phi}] is not a regular interval")

    @property
    def free(self) -> tuple[int, ...]:
        """Vertices of phi not in rho."""
        return tuple(v for v in self.phi if v not in self.rho)

    @property
    def size(self) -> int:
        return 2 ** len(self.free)

    def simplices(self) -> Iterator[Simplex]:
        free = self.free
        for k in range(len(free) + 1):
            for extra in combinations(free, k):
                yield tuple(sorted(self.rho + extra))

    def __contains__(self, sigma: object) -> bool:
        if not isinstance(sigma, tuple):
            return False
        return set(self.rho) <= set(sigma) <= set(self.phi)

    def pairs(self, order: VertexOrder) -> list[tuple[Simplex, Simplex]]:
        """Minimal vertex refinement: (psi, psi + v) along v = min(phi - rho)."""
        v = order.min_vertex(self.free)
        return [(psi, add_vertex(psi, v)) for psi in self.simplices() if v not in psi]

    def dump(self, names: Optional[tuple[str, ...]] = None) -> str:
        return f"{_label(self.rho, names)} -> {_label(self.phi, names)}"


class DiscreteGradient:
    """Pairwise disjoint regular intervals; uncovered simplices are critical.

    Disjointness and acyclicity are properties checked by
    `morse.validation.validate_gradient`, not enforced here.
    """

    def __init__(self, intervals: Iterable[GradientInterval], order: Optional[VertexOrder] = None):
        self.intervals: tuple[GradientInterval, ...] = tuple(sorted(set(intervals)))
        self.order = order

    @classmethod
    def from_matching(cls, matching: "Matching", order: Optional[VertexOrder] = None) -> "DiscreteGradient":
        return cls((GradientInterval(s, t) for s, t in matching.pairs), order)

    def __iter__(self) -> Iterator[GradientInterval]:
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DiscreteGradient):
            return NotImplemented
        return self.intervals == other.intervals

    def __repr__(self) -> str:
        return f"DiscreteGradient({len(self.intervals)} intervals)"

    @cached_property
    def _owner(self) -> dict[Simplex, GradientInterval]:
        # On overlapping input the first interval wins; validation reports overlaps
        owner: dict[Simplex, GradientInterval] = {}
        for interval in self.intervals:
            for sigma in interval.simplices():
                owner.setdefault(sigma, interval)
        return owner

    def covered(self) -> set[Simplex]:
        return set(self._owner)

    def interval_of(self, sigma: Simplex) -> Optional[GradientInterval]:
        return self._owner.get(sigma)

    def is_critical(self, sigma: Simplex) -> bool:
        return sigma not in self._owner

    def union(self, other: "DiscreteGradient") -> "DiscreteGradient":
        return DiscreteGradient(self.intervals + other.intervals, self.order or other.order)

    def restrict(self, keep: Callable[[GradientInterval], bool]) -> "DiscreteGradient":
        return DiscreteGradient((i for i in self.intervals if keep(i)), self.order)

    def with_order(self, order: VertexOrder) -> "DiscreteGradient":
        return DiscreteGradient(self.intervals, order)

    def dump(self, space: Optional[FiniteMetricSpace] = None) -> str:
        names = space.names if space is not None else None
        lines = [interval.dump(names) for interval in self.intervals]
        return "\n".join(lines) + ("\n" if lines else "")


class Matching:
    """Facet pairs (sigma, tau); every simplex occurs at most once."""

    def __init__(self, pairs: Iterable[tuple[Simplex, Simplex]]):
        self.pairs: tuple[tuple[Simplex, Simplex], ...] = tuple(sorted(set(pairs)))
        self._partner: dict[Simplex, Simplex] = {}
        for sigma, tau in self.pairs:
            if not is_facet(sigma, tau):
                raise GradientError(f"{sigma} is not a facet of {tau}")
            for a, b in ((sigma, tau), (tau, sigma)):
                if a in self._partner:
                    raise GradientError(f"simplex {a} is matched twice")
                self._partner[a] = b

    def __iter__(self) -> Iterator[tuple[Simplex, Simplex]]:
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matching):
            return NotImplemented
        return self.pairs == other.pairs

    def __repr__(self) -> str:
        return f"Matching({len(self.pairs)} pairs)"

    def partner(self, sigma: Simplex) -> Optional[Simplex]:
        return self._partner.get(sigma)

    def simplices(self) -> set[Simplex]:
        return set(self._partner)

    def lower(self) -> dict[Simplex, Simplex]:
        """Map from the lower simplex of each pair to its upper partner."""
        return {sigma: tau for sigma, tau in self.pairs}

    def restrict(self, keep: Callable[[Simplex, Simplex], bool]) -> "Matching":
        return Matching(p for p in self.pairs if keep(*p))

    def dump(self, space: Optional[FiniteMetricSpace] = None) -> str:
        names = space.names if space is not None else None
        lines = [f"{_label(s, names)} ; {_label(t, names)}" for s, t in self.pairs]
        return "\n".join(lines) + ("\n" if lines else "")


def minimal_vertex_refinement(V: DiscreteGradient, order: Optional[VertexOrder] = None) -> Matching:
    """Split each interval [rho, phi] into facet pairs along v = min(phi - rho).

    The order defaults to the gradient's own order, then to vertex index.
    """
    active = order or V.order
    if active is None:
        n = 1 + max((max(i.phi) for i in V.intervals), default=0)
        active = VertexOrder.identity(n)
    pairs = [pair for interval in V.intervals for pair in interval.pairs(active)]
    logger.debug(f"Refined {len(V)} intervals into {len(pairs)} pairs")
    return Matching(pairs)
