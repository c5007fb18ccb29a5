"""Positively weighted trees, their vertex metrics and compatible vertex orders."""

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Optional, Sequence

import networkx as nx

from complexes.simplex import VertexOrder
from errors import CompatibilityError, NotATreeMetricError, TreeStructureError
from logging_config import get_logger
from metric.space import FiniteMetricSpace
from metric.values import Distance, DistanceMode

logger = get_logger(__name__)


@dataclass(frozen=True)
class TreeEdge:
    u: int
    v: int
    length: Distance

    @property
    def key(self) -> tuple[int, int]:
        return (min(self.u, self.v), max(self.u, self.v))


@dataclass(frozen=True)
class WeightedTree:
    """Tree T=(V,E) with strictly positive edge lengths and an optional root."""

    names: tuple[str, ...]
    edges: tuple[TreeEdge, ...]
    mode: DistanceMode = field(default_factory=DistanceMode.rational)
    root: Optional[int] = None

    def __post_init__(self) -> None:
        n = len(self.names)
        if n == 0:
            raise TreeStructureError("a tree needs at least one vertex")
        if len(self.edges) != n - 1:
            raise TreeStructureError(f"a tree on {n} vertices needs {n - 1} edges, got {len(self.edges)}")
        for edge in self.edges:
            if not (0 <= edge.u < n and 0 <= edge.v < n) or edge.u == edge.v:
                raise TreeStructureError(f"invalid edge ({edge.u}, {edge.v})")
            if not edge.length > 0:
                raise TreeStructureError(
                    f"edge {self.names[edge.u]}-{self.names[edge.v]} has nonpositive length {edge.length}"
                )
        if not nx.is_tree(self.graph()):
            raise TreeStructureError("edges do not form a connected acyclic graph")
        if self.root is not None and not 0 <= self.root < n:
            raise TreeStructureError(f"root {self.root} is not a vertex")

    @classmethod
    def from_edges(
        cls,
        names: Sequence[str],
        edges: Sequence[tuple[int, int, object]],
        mode: Optional[DistanceMode] = None,
        root: Optional[int] = None,
    ) -> "WeightedTree":
        mode = mode or DistanceMode.rational()
        return cls(
            tuple(names),
            tuple(TreeEdge(u, v, mode.coerce(length)) for u, v, length in edges),  # type: ignore[arg-type]
            mode,
            root,
        )

    @property
    def n(self) -> int:
        return len(self.names)

    def graph(self) -> nx.Graph:
        G = nx.Graph()
        G.add_nodes_from(range(len(self.names)))
        for edge in self.edges:
            G.add_edge(edge.u, edge.v, length=edge.length)
        return G

    @property
    def edge_keys(self) -> frozenset[tuple[int, int]]:
        return frozenset(edge.key for edge in self.edges)

    @property
    def max_edge_length(self) -> Distance:
        return max((edge.length for edge in self.edges), default=self.mode.zero)


def tree_metric(T: WeightedTree) -> FiniteMetricSpace:
    """Path-length metric on the vertices of T."""
    G = T.graph()
    rows = []
    for source in range(T.n):
        lengths = nx.single_source_dijkstra_path_length(G, source, weight="length")
        rows.append(tuple(T.mode.coerce(lengths[target]) for target in range(T.n)))
    return FiniteMetricSpace(T.names, tuple(rows), T.mode)


def compatible_order(T: WeightedTree, root: Optional[int] = None) -> VertexOrder:
    """Total order extending the rooted tree order.

    A vertex precedes every vertex whose root path passes through it; ties
    are broken by distance to the root, then by index. Sorting by distance
    alone already respects the tree order because edge lengths are positive.
    """
    root = _resolve_root(T, root)
    lengths = nx.single_source_dijkstra_path_length(T.graph(), root, weight="length")
    return VertexOrder(tuple(sorted(range(T.n), key=lambda v: (lengths[v], v))))


def is_compatible(
    T: WeightedTree, order: VertexOrder, root: Optional[int] = None
) -> tuple[bool, Optional[tuple[int, int]]]:
    """Whether `order` extends the tree order rooted at `root`.

    The root is `root`, else the tree's declared root, else the first vertex
    of the order. Every vertex descends from the root, so a root ranked late
    shows up as some child ranked before its parent.

    Returns:
        (True, None) or (False, (parent, child)) for a child ranked before its parent
    """
    if order.n != T.n:
        raise CompatibilityError(f"order covers {order.n} vertices, tree has {T.n}")
    if root is None and T.root is None:
        root = order.sequence[0]
    root = _resolve_root(T, root)
    for child, parent in nx.bfs_predecessors(T.graph(), root):
        if order.rank(parent) > order.rank(child):
            return False, (parent, child)
    return True, None


def require_compatible(T: WeightedTree, order: VertexOrder, root: Optional[int] = None) -> None:
    ok, witness = is_compatible(T, order, root)
    if not ok:
        assert witness is not None
        parent, child = witness
        raise CompatibilityError(
            f"order places '{T.names[child]}' before its parent '{T.names[parent]}'",
            parent=T.names[parent],
            child=T.names[child],
        )


def _resolve_root(T: WeightedTree, root: Optional[int]) -> int:
    if root is None:
        root = T.root if T.root is not None else 0
    if not 0 <= root < T.n:
        raise CompatibilityError(f"root {root} is not a vertex of the tree")
    return root


def recover_tree(X: FiniteMetricSpace) -> WeightedTree:
    """Reconstruct the weighted tree whose vertex metric is X.

    {x,y} is a tree edge iff no third point lies metrically between x and y.

    Raises:
        NotATreeMetricError: if the candidate edges do not form a tree reproducing X
    """
    return _recover_tree_cached(X)


@lru_cache(maxsize=64)
def _recover_tree_cached(X: FiniteMetricSpace) -> WeightedTree:
    mode = X.mode
    edges = []
    for x, y in combinations(range(X.n), 2):
        between = any(
            mode.eq(X.d(x, z) + X.d(z, y), X.d(x, y)) for z in range(X.n) if z not in (x, y)
        )
        if not between:
            edges.append(TreeEdge(x, y, X.d(x, y)))
    if len(edges) != X.n - 1:
        raise NotATreeMetricError(
            f"metric has {len(edges)} unsplittable pairs, a tree on {X.n} points has {X.n - 1}"
        )
    try:
        T = WeightedTree(X.names, tuple(edges), mode)
    except TreeStructureError as exc:
        raise NotATreeMetricError(f"unsplittable pairs do not form a tree: {exc.message}") from exc
    rebuilt = tree_metric(T)
    for x, y in combinations(range(X.n), 2):
        if not mode.eq(rebuilt.d(x, y), X.d(x, y)):
            raise NotATreeMetricError(
                f"tree path length {rebuilt.d(x, y)} differs from d({X.names[x]},{X.names[y]}) = {X.d(x, y)}"
            )
    logger.debug(f"Recovered tree with {len(edges)} edges on {X.n} points")
    return T
