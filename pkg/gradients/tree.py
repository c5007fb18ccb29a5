"""Gradients of Rips complexes of tree metrics: generic, canonical and perturbed.

All three are assembled from the maximal simplices of each distance level.
For a non-tree edge e = {x, y} at level r, the points within r of both x and y
span the unique maximal simplex Delta_e of that level containing e.
"""

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from complexes.rips import SimplicialComplex, full_complex
from complexes.simplex import Simplex, VertexOrder
from errors import GenericityError, NotATreeMetricError, NumericModeError
from logging_config import get_logger
from metric.space import FiniteMetricSpace
from metric.trees import WeightedTree, recover_tree
from morse.gradient import DiscreteGradient, GradientInterval
from morse.validation import merge_gradients

logger = get_logger(__name__)


@dataclass(frozen=True)
class MaximalSimplexRecord:
    """A maximal simplex of one level with its non-tree edges and cone vertices."""

    delta: Simplex
    edges: tuple[Simplex, ...]  # E_Delta
    cone: tuple[int, ...]  # L_Delta
    level: int


def require_tree_metric(X: FiniteMetricSpace) -> WeightedTree:
    """Tree underlying X; refuses decimal levels that merge distinct distances."""
    if not X.levels_are_exact():
        raise NumericModeError(
            "decimal distance levels merge distinct values; tree gradients need exact levels"
        )
    return recover_tree(X)


def ball_intersection(X: FiniteMetricSpace, x: int, y: int, level: int) -> Simplex:
    """Points within distance level `level` of both x and y."""
    return tuple(z for z in range(X.n) if X.level(x, z) <= level and X.level(y, z) <= level)


def max_simplex_of_edge(X: FiniteMetricSpace, e: Simplex) -> Simplex:
    """Unique maximal simplex Delta_e of VR at d(x,y) containing the edge e = {x, y}.

    Raises:
        NotATreeMetricError: If the ball intersection is wider than d(x,y)
    """
    if len(e) != 2:
        raise ValueError(f"expected an edge, got {e}")
    x, y = e
    level = X.level(x, y)
    delta = ball_intersection(X, x, y, level)
    if X.diameter_level(delta) > level:
        raise NotATreeMetricError(
            f"points near both {X.label(e)} span diameter {X.diameter(delta)} > {X.d(x, y)}"
        )
    return delta


def maximal_simplices(X: FiniteMetricSpace, level: int, tree: Optional[WeightedTree] = None) -> list[MaximalSimplexRecord]:
    """Maximal simplices Delta spanned by the non-tree edges of one level."""
    tree = tree or require_tree_metric(X)
    tree_edges = tree.edge_keys
    level_edges = [
        e for e in combinations(range(X.n), 2) if X.level(*e) == level and e not in tree_edges
    ]
    deltas = sorted({max_simplex_of_edge(X, e) for e in level_edges})
    records = []
    for delta in deltas:
        edges = tuple(e for e in combinations(delta, 2) if X.level(*e) == level and e not in tree_edges)
        touched = {v for e in edges for v in e}
        cone = tuple(v for v in delta if v not in touched)
        if not cone:
            raise NotATreeMetricError(f"maximal simplex {X.label(delta)} has no cone vertex")
        records.append(MaximalSimplexRecord(delta, edges, cone, level))
    return records


def generic_gradient(X: FiniteMetricSpace) -> DiscreteGradient:
    """Intervals [e, Delta_e] over the non-tree edges of a tree metric with distinct distances.

    Raises:
        GenericityError: Naming two pairs at the same distance
    """
    tree = require_tree_metric(X)
    seen: dict[int, tuple[int, int]] = {}
    for pair in combinations(range(X.n), 2):
        level = X.level(*pair)
        if level in seen:
            raise GenericityError(
                f"d({X.label(seen[level])}) = d({X.label(pair)}) = {X.d(*pair)}", seen[level], pair
            )
        seen[level] = pair
    tree_edges = tree.edge_keys
    intervals = [
        GradientInterval(e, max_simplex_of_edge(X, e))
        for e in combinations(range(X.n), 2)
        if e not in tree_edges
    ]
    logger.debug(f"Generic gradient: {len(intervals)} intervals")
    return DiscreteGradient(intervals)


def _canonical_intervals(record: MaximalSimplexRecord) -> list[GradientInterval]:
    """[U, U + L_Delta] for every union U of a nonempty set of E_Delta edges."""
    partners: dict[int, set[int]] = {}
    for a, b in record.edges:
        partners.setdefault(a, set()).add(b)
        partners.setdefault(b, set()).add(a)
    movable = sorted(partners)
    intervals = []
    for k in range(2, len(movable) + 1):
        for subset in combinations(movable, k):
            chosen = set(subset)
            if all(partners[v] & chosen for v in subset):
                intervals.append(GradientInterval(subset, tuple(sorted(chosen | set(record.cone)))))
    return intervals


def _perturbed_intervals(X: FiniteMetricSpace, record: MaximalSimplexRecord, order: VertexOrder) -> list[GradientInterval]:
    """[e_i, Sigma_i] with Sigma_i the union of the simplices whose largest E_Delta edge is e_i."""
    edges = sorted(record.edges, key=order.lex_key)
    rank = {e: k for k, e in enumerate(edges)}
    edge_set = set(edges)
    intervals = []
    for e in edges:
        sigma = set(e) | set(record.cone)
        for w in record.delta:
            if w in sigma:
                continue
            spanned = [f for f in (tuple(sorted((w, v))) for v in e) if f in edge_set]
            if all(rank[f] < rank[e] for f in spanned):
                sigma.add(w)
        intervals.append(GradientInterval(e, tuple(sorted(sigma))))
    return intervals


def _assemble(
    X: FiniteMetricSpace,
    per_level: dict[int, list[GradientInterval]],
    order: Optional[VertexOrder],
    full: Optional[SimplicialComplex] = None,
) -> DiscreteGradient:
    """Merge per-level gradients W_m on the nested complexes VR_{r_m}."""
    full = full or full_complex(X)
    parts = []
    for level in sorted(per_level):
        if per_level[level]:
            parts.append((full.restrict_to_level(level), DiscreteGradient(per_level[level], order)))
    return merge_gradients(parts).with_order(order) if order else merge_gradients(parts)


def canonical_gradient(X: FiniteMetricSpace, full: Optional[SimplicialComplex] = None) -> DiscreteGradient:
    """Union over levels and maximal simplices of the canonical intervals; order independent."""
    tree = require_tree_metric(X)
    per_level = {
        level: [i for record in maximal_simplices(X, level, tree) for i in _canonical_intervals(record)]
        for level in range(1, len(X.levels))
    }
    gradient = _assemble(X, per_level, None, full)
    logger.debug(f"Canonical gradient: {len(gradient)} intervals")
    return gradient


def perturbed_gradient(
    X: FiniteMetricSpace,
    order: Optional[VertexOrder] = None,
    full: Optional[SimplicialComplex] = None,
) -> DiscreteGradient:
    """Coarsening of the canonical gradient by lexicographic edge strata."""
    tree = require_tree_metric(X)
    order = order or VertexOrder.identity(X.n)
    per_level = {
        level: [i for record in maximal_simplices(X, level, tree) for i in _perturbed_intervals(X, record, order)]
        for level in range(1, len(X.levels))
    }
    gradient = _assemble(X, per_level, order, full)
    logger.debug(f"Perturbed gradient: {len(gradient)} intervals")
    return gradient


def tree_complex(X: FiniteMetricSpace, tree: Optional[WeightedTree] = None) -> SimplicialComplex:
    """The tree itself as a 1-dimensional complex on the points of X."""
    tree = tree or require_tree_metric(X)
    return SimplicialComplex(X, [(v,) for v in range(X.n)] + sorted(tree.edge_keys))
