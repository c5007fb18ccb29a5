"""Simplicial complexes over a metric space and Vietoris-Rips construction."""

from typing import Callable, Iterable, Iterator, Optional

import networkx as nx

from complexes.simplex import Simplex, add_vertex, facets
from config import SIMPLEX_BUDGET
from errors import BudgetExceededError, InvalidParameterError
from logging_config import get_logger
from metric.space import FiniteMetricSpace
from metric.trees import WeightedTree, tree_metric
from metric.values import Distance, format_value

logger = get_logger(__name__)


def _sort_key(sigma: Simplex) -> tuple[int, Simplex]:
    return (len(sigma), sigma)


class SimplicialComplex:
    """Immutable set of simplices over the points of a metric space."""

    def __init__(
        self,
        space: FiniteMetricSpace,
        simplices: Iterable[Simplex],
        dim_cap: Optional[int] = None,
    ):
        self.space = space
        self.dim_cap = dim_cap
        self._simplices = frozenset(tuple(s) for s in simplices)
        self._neighbors: dict[int, set[int]] = {}
        for sigma in self._simplices:
            if len(sigma) == 2:
                a, b = sigma
                self._neighbors.setdefault(a, set()).add(b)
                self._neighbors.setdefault(b, set()).add(a)

    def __contains__(self, sigma: object) -> bool:
        return sigma in self._simplices

    def __iter__(self) -> Iterator[Simplex]:
        return iter(sorted(self._simplices, key=_sort_key))

    def __len__(self) -> int:
        return len(self._simplices)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self._simplices == other._simplices

    def __hash__(self) -> int:
        return hash(self._simplices)

    def __repr__(self) -> str:
        return f"SimplicialComplex({len(self)} simplices, dim {self.dimension})"

    @property
    def simplices(self) -> frozenset[Simplex]:
        return self._simplices

    @property
    def dimension(self) -> int:
        return max((len(s) - 1 for s in self._simplices), default=-1)

    def by_dimension(self, k: int) -> list[Simplex]:
        return sorted(s for s in self._simplices if len(s) == k + 1)

    def vertices(self) -> list[int]:
        return sorted(s[0] for s in self._simplices if len(s) == 1)

    def is_closed(self) -> bool:
        return all(f in self._simplices for s in self._simplices for f in facets(s))

    def cofacets(self, sigma: Simplex) -> list[Simplex]:
        """Codimension-one cofaces present in the complex.

        Candidates are the common neighbours of the vertices of sigma in the
        1-skeleton, so only vertices within reach of all of sigma are tried.
        """
        candidates: Optional[set[int]] = None
        for v in sigma:
            nbrs = self._neighbors.get(v, set())
            candidates = set(nbrs) if candidates is None else candidates & nbrs
        result = []
        for w in sorted(candidates or ()):
            tau = add_vertex(sigma, w)
            if tau in self._simplices:
                result.append(tau)
        return result

    def union(self, other: "SimplicialComplex") -> "SimplicialComplex":
        return SimplicialComplex(self.space, self._simplices | other._simplices, self.dim_cap)

    def subcomplex(self, keep: Callable[[Simplex], bool]) -> "SimplicialComplex":
        """Simplices satisfying `keep`; the caller keeps the result closed."""
        return SimplicialComplex(self.space, (s for s in self._simplices if keep(s)), self.dim_cap)

    def restrict_to_level(self, level: int) -> "SimplicialComplex":
        """Simplices whose diameter level is at most `level` (the Rips complex at that scale)."""
        return self.subcomplex(lambda s: self.space.diameter_level(s) <= level)

    def euler_characteristic(self) -> int:
        return euler_characteristic(self._simplices)


def euler_characteristic(simplices: Iterable[Simplex]) -> int:
    """Alternating count of simplices by dimension."""
    return sum(1 if len(s) % 2 else -1 for s in simplices)


def neighborhood_graph(X: FiniteMetricSpace, level: int) -> nx.Graph:
    """Graph on the points joining pairs whose distance level is at most `level`."""
    G = nx.Graph()
    G.add_nodes_from(range(X.n))
    G.add_edges_from((i, j) for i in range(X.n) for j in range(i + 1, X.n) if X.level(i, j) <= level)
    return G


def rips_at_level(
    X: FiniteMetricSpace,
    level: int,
    dim_cap: Optional[int] = None,
    budget: Optional[int] = None,
) -> SimplicialComplex:
    """Clique complex of the neighborhood graph at a distance level."""
    budget = SIMPLEX_BUDGET if budget is None else budget
    if dim_cap is not None and dim_cap < 0:
        raise InvalidParameterError(f"dim_cap must be nonnegative, got {dim_cap}")
    simplices: list[Simplex] = []
    if level >= 0:
        max_size = None if dim_cap is None else dim_cap + 1
        # Cliques arrive in nondecreasing size, so the cap can stop the scan
        for clique in nx.enumerate_all_cliques(neighborhood_graph(X, level)):
            if max_size is not None and len(clique) > max_size:
                break
            simplices.append(tuple(sorted(clique)))
            if len(simplices) > budget:
                raise BudgetExceededError(
                    f"Rips complex exceeds the simplex budget of {budget}", limit=budget, requested=len(simplices)
                )
    logger.debug(f"Rips complex at level {level} (cap {dim_cap}): {len(simplices)} simplices")
    return SimplicialComplex(X, simplices, dim_cap)


def vietoris_rips(
    X: FiniteMetricSpace,
    t: Distance,
    dim_cap: Optional[int] = None,
    budget: Optional[int] = None,
) -> SimplicialComplex:
    """All nonempty point sets of diameter at most t (up to `dim_cap`).

    Raises:
        InvalidParameterError: If t is negative
        BudgetExceededError: If more than `budget` simplices would be built
    """
    if t < 0:
        raise InvalidParameterError(f"t must be nonnegative, got {t}")
    return rips_at_level(X, X.level_index(t), dim_cap, budget)


def full_complex(
    X: FiniteMetricSpace,
    dim_cap: Optional[int] = None,
    budget: Optional[int] = None,
) -> SimplicialComplex:
    """Rips complex at the largest distance: every nonempty point set."""
    return rips_at_level(X, len(X.levels) - 1, dim_cap, budget)


def diameter(sigma: Simplex, X: FiniteMetricSpace) -> Distance:
    """Largest pairwise distance of the vertices; zero for a vertex."""
    return X.diameter(sigma)


def subforest(T: WeightedTree, t: Distance, space: Optional[FiniteMetricSpace] = None) -> SimplicialComplex:
    """All vertices of T plus the tree edges of length at most t."""
    if t < 0:
        raise InvalidParameterError(f"t must be nonnegative, got {t}")
    space = space or tree_metric(T)
    simplices: list[Simplex] = [(v,) for v in range(T.n)]
    simplices.extend(edge.key for edge in T.edges if T.mode.le(edge.length, t))
    return SimplicialComplex(space, simplices)


def dump_complex(K: SimplicialComplex, order_key: Optional[Callable[[Simplex], object]] = None) -> str:
    """One simplex per line, "v0 v1 ... vk : diameter", in diameter-lexicographic order."""
    X = K.space
    key = order_key or (lambda s: (X.diameter_level(s), len(s), s))
    lines = [f"{X.label(s)} : {format_value(X.diameter(s))}" for s in sorted(K.simplices, key=key)]
    return "\n".join(lines) + ("\n" if lines else "")
