"""Seeded dataset generators and small named spaces."""

from fractions import Fraction
from itertools import combinations
import math
from typing import Optional, Sequence

import networkx as nx
import numpy as np

from config import (
    DEFAULT_WEIGHT_HIGH,
    DEFAULT_WEIGHT_LOW,
    MAX_SAMPLING_ATTEMPTS,
    METRIC_WEIGHT_HIGH,
    METRIC_WEIGHT_LOW,
)
from errors import InvalidParameterError, MetricAxiomError
from logging_config import get_logger
from metric.space import FiniteMetricSpace, validate_metric
from metric.trees import TreeEdge, WeightedTree
from metric.values import DistanceMode

logger = get_logger(__name__)


def _check_range(n: int, low: int, high: int) -> None:
    if n < 1:
        raise InvalidParameterError(f"n must be at least 1, got {n}")
    if not 0 < low <= high:
        raise InvalidParameterError(f"weight range must satisfy 0 < low <= high, got [{low}, {high}]")


def random_tree(
    n: int,
    rng: np.random.Generator,
    low: int = DEFAULT_WEIGHT_LOW,
    high: int = DEFAULT_WEIGHT_HIGH,
) -> WeightedTree:
    """Uniform labelled tree on n vertices (via a Pruefer sequence), integer weights in [low, high]."""
    _check_range(n, low, high)
    if n == 1:
        pairs: list[tuple[int, int]] = []
    elif n == 2:
        pairs = [(0, 1)]
    else:
        sequence = [int(v) for v in rng.integers(0, n, size=n - 2)]
        pairs = sorted(tuple(sorted(e)) for e in nx.from_prufer_sequence(sequence).edges())
    weights = rng.integers(low, high + 1, size=len(pairs))
    edges = tuple(TreeEdge(u, v, Fraction(int(w))) for (u, v), w in zip(pairs, weights))
    return WeightedTree(tuple(str(i) for i in range(n)), edges, DistanceMode.rational(), root=0)


def random_metric(
    n: int,
    rng: np.random.Generator,
    low: int = METRIC_WEIGHT_LOW,
    high: int = METRIC_WEIGHT_HIGH,
    max_attempts: int = MAX_SAMPLING_ATTEMPTS,
) -> FiniteMetricSpace:
    """Integer metric with off-diagonal entries drawn uniformly from [low, high].

    Draws are rejected until the triangle inequality holds; with high <= 2*low
    the first draw always succeeds.
    """
    _check_range(n, low, high)
    for attempt in range(1, max_attempts + 1):
        matrix = [[Fraction(0)] * n for _ in range(n)]
        for i, j in combinations(range(n), 2):
            matrix[i][j] = matrix[j][i] = Fraction(int(rng.integers(low, high + 1)))
        space = FiniteMetricSpace(
            tuple(str(i) for i in range(n)), tuple(tuple(row) for row in matrix), DistanceMode.rational()
        )
        try:
            validate_metric(space)
        except MetricAxiomError:
            continue
        logger.debug(f"Random metric on {n} points accepted after {attempt} draw(s)")
        return space
    raise InvalidParameterError(f"no metric found in {max_attempts} draws for range [{low}, {high}]")


def subdivide_tree(T: WeightedTree, step: Fraction) -> WeightedTree:
    """Split every edge into the fewest equal pieces of length at most `step`.

    The vertices of the result are an r-dense sample of the geodesic
    realization of T for r = step / 2.
    """
    step = Fraction(step)
    if step <= 0:
        raise InvalidParameterError(f"step must be positive, got {step}")
    names = list(T.names)
    edges: list[TreeEdge] = []
    for edge in T.edges:
        length = Fraction(edge.length)
        pieces = max(1, math.ceil(length / step))
        chain = [edge.u]
        for k in range(1, pieces):
            chain.append(len(names))
            names.append(f"{T.names[edge.u]}-{T.names[edge.v]}.{k}")
        chain.append(edge.v)
        edges.extend(TreeEdge(a, b, length / pieces) for a, b in zip(chain, chain[1:]))
    logger.debug(f"Subdivided {T.n}-vertex tree into {len(names)} vertices at step {step}")
    return WeightedTree(tuple(names), tuple(edges), DistanceMode.rational(), T.root)


def graph_metric(
    names: Sequence[str],
    edges: Sequence[tuple[str, str, object]],
    mode: Optional[DistanceMode] = None,
) -> FiniteMetricSpace:
    """Shortest-path metric of a connected weighted graph given by named edges."""
    mode = mode or DistanceMode.rational()
    G = nx.Graph()
    G.add_nodes_from(names)
    for u, v, length in edges:
        G.add_edge(u, v, length=mode.coerce(length))  # type: ignore[arg-type]
    if not nx.is_connected(G):
        raise InvalidParameterError("graph is not connected")
    lengths = dict(nx.all_pairs_dijkstra_path_length(G, weight="length"))
    rows = [[lengths[u][v] for v in names] for u in names]
    return FiniteMetricSpace.from_matrix(rows, names, mode)


def cycle_graph_metric(n: int, mode: Optional[DistanceMode] = None) -> FiniteMetricSpace:
    """Path metric of the cycle graph C_n with unit edges."""
    if n < 3:
        raise InvalidParameterError(f"a cycle needs at least 3 vertices, got {n}")
    names = [str(i) for i in range(n)]
    return graph_metric(names, [(names[i], names[(i + 1) % n], 1) for i in range(n)], mode)
