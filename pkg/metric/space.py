"""Finite metric spaces and their distance levels."""

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Optional, Sequence

import numpy as np

from errors import MetricAxiomError
from logging_config import get_logger
from metric.values import Distance, DistanceMode

logger = get_logger(__name__)


@dataclass(frozen=True)
class FiniteMetricSpace:
    """Symmetric distance matrix with zero diagonal over named points.

    Diameters of simplices are handled as integer level indices into
    `levels`, the ascending list of distinct distances (epsilon-clustered in
    decimal mode), so every comparison between diameters is exact.
    """

    names: tuple[str, ...]
    dist: tuple[tuple[Distance, ...], ...]
    mode: DistanceMode = field(default_factory=DistanceMode.rational)
    merged: tuple[tuple[str, ...], ...] = ()  # names of coincident points collapsed into the first

    def __post_init__(self) -> None:
        n = len(self.names)
        if n == 0:
            raise MetricAxiomError("a metric space needs at least one point", [])
        if len(self.dist) != n or any(len(row) != n for row in self.dist):
            raise MetricAxiomError(f"distance matrix is not {n}x{n}", list(self.names))

    @classmethod
    def from_matrix(
        cls,
        rows: Sequence[Sequence[Distance]],
        names: Optional[Sequence[str]] = None,
        mode: Optional[DistanceMode] = None,
        allow_pseudo: bool = False,
    ) -> "FiniteMetricSpace":
        """Build and validate a space from a full square matrix."""
        mode = mode or DistanceMode.rational()
        labels = tuple(names) if names is not None else tuple(str(i) for i in range(len(rows)))
        matrix = tuple(tuple(mode.coerce(v) for v in row) for row in rows)
        return validate_metric(cls(labels, matrix, mode), allow_pseudo=allow_pseudo)

    # === Basic access ===

    @property
    def n(self) -> int:
        return len(self.names)

    def d(self, i: int, j: int) -> Distance:
        return self.dist[i][j]

    def label(self, vertices: Iterable[int]) -> str:
        return " ".join(self.names[v] for v in vertices)

    def index_of(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown point '{name}'") from None

    @property
    def max_distance(self) -> Distance:
        return self.levels[-1]

    @property
    def min_positive_distance(self) -> Optional[Distance]:
        return self.levels[1] if len(self.levels) > 1 else None

    # === Distance levels ===

    @cached_property
    def _clusters(self) -> tuple[tuple[Distance, ...], ...]:
        values = sorted({self.dist[i][j] for i in range(self.n) for j in range(i, self.n)})
        clusters: list[list[Distance]] = []
        for value in values:
            if clusters and self.mode.eq(clusters[-1][0], value):
                clusters[-1].append(value)
            else:
                clusters.append([value])
        if not self.mode.is_exact:
            for lower, upper in zip(clusters, clusters[1:]):
                if upper[0] - lower[-1] <= 2 * self.mode.eps:
                    logger.warning(
                        f"Distance levels {lower[0]!r} and {upper[0]!r} are within 2*eps={2 * self.mode.eps}"
                    )
        return tuple(tuple(c) for c in clusters)

    @cached_property
    def levels(self) -> tuple[Distance, ...]:
        """Ascending distinct distances r_0 = 0 < r_1 < ... (cluster anchors in decimal mode)."""
        return tuple(c[0] for c in self._clusters)

    @cached_property
    def level_matrix(self) -> np.ndarray:
        lookup = {value: k for k, cluster in enumerate(self._clusters) for value in cluster}
        matrix = np.zeros((self.n, self.n), dtype=np.int64)
        for i in range(self.n):
            for j in range(self.n):
                matrix[i, j] = lookup[self.dist[i][j]]
        return matrix

    @cached_property
    def _level_rows(self) -> list[list[int]]:
        return self.level_matrix.tolist()

    def level(self, i: int, j: int) -> int:
        return self._level_rows[i][j]

    def diameter_level(self, vertices: Sequence[int]) -> int:
        rows = self._level_rows
        return max((rows[a][b] for a, b in combinations(vertices, 2)), default=0)

    def diameter(self, vertices: Sequence[int]) -> Distance:
        return self.levels[self.diameter_level(vertices)]

    def level_index(self, t: Distance) -> int:
        """Largest level whose value is <= t; -1 when t lies below zero."""
        index = -1
        for k, value in enumerate(self.levels):
            if self.mode.le(value, t):
                index = k
            else:
                break
        return index

    def levels_are_exact(self) -> bool:
        """True when no level merges distinct raw values (always true in rational mode)."""
        return all(len(set(cluster)) == 1 for cluster in self._clusters)

    # === Derived spaces ===

    def restrict(self, points: Sequence[int]) -> "FiniteMetricSpace":
        """Subspace on `points`, in the given order."""
        pts = list(points)
        return FiniteMetricSpace(
            tuple(self.names[p] for p in pts),
            tuple(tuple(self.dist[p][q] for q in pts) for p in pts),
            self.mode,
        )

    def permuted(self, perm: Sequence[int]) -> "FiniteMetricSpace":
        """Same space with point i of the result being point perm[i] of this one."""
        if sorted(perm) != list(range(self.n)):
            raise ValueError("perm must be a permutation of the point indices")
        return self.restrict(perm)


def distance_levels(X: FiniteMetricSpace) -> list[Distance]:
    """Sorted distinct distances r_0 = 0 < ... < r_l of X."""
    return list(X.levels)


def validate_metric(X: FiniteMetricSpace, allow_pseudo: bool = False) -> FiniteMetricSpace:
    """Check the metric axioms; with `allow_pseudo`, collapse zero-distance duplicates.

    Raises:
        MetricAxiomError: naming the offending pair or triple
    """
    mode, names, n = X.mode, X.names, X.n

    for i in range(n):
        if not mode.is_zero(X.d(i, i)):
            raise MetricAxiomError(f"nonzero diagonal entry at '{names[i]}'", [names[i]])
    for i, j in combinations(range(n), 2):
        a, b = X.d(i, j), X.d(j, i)
        if not mode.eq(a, b):
            raise MetricAxiomError(
                f"asymmetric distances between '{names[i]}' and '{names[j]}': {a} vs {b}",
                [names[i], names[j]],
            )
        if a < 0:
            raise MetricAxiomError(
                f"negative distance between '{names[i]}' and '{names[j]}'", [names[i], names[j]]
            )
        if mode.is_zero(a) and not allow_pseudo:
            raise MetricAxiomError(
                f"distinct points '{names[i]}' and '{names[j]}' are at distance zero",
                [names[i], names[j]],
            )

    for i in range(n):
        for k in range(i + 1, n):
            for j in range(n):
                if j in (i, k):
                    continue
                if mode.lt(X.d(i, j) + X.d(j, k), X.d(i, k)):
                    raise MetricAxiomError(
                        f"triangle inequality fails: d({names[i]},{names[k]}) > "
                        f"d({names[i]},{names[j]}) + d({names[j]},{names[k]})",
                        [names[i], names[j], names[k]],
                    )

    if not allow_pseudo:
        return X
    return _collapse_duplicates(X)


def _collapse_duplicates(X: FiniteMetricSpace) -> FiniteMetricSpace:
    groups: list[list[int]] = []
    owner: dict[int, int] = {}
    for i in range(X.n):
        for g, group in enumerate(groups):
            if X.mode.is_zero(X.d(group[0], i)):
                group.append(i)
                owner[i] = g
                break
        else:
            owner[i] = len(groups)
            groups.append([i])
    if len(groups) == X.n:
        return X
    merged = tuple(tuple(X.names[v] for v in g) for g in groups if len(g) > 1)
    logger.warning(
        f"Collapsed {X.n - len(groups)} duplicate point(s): " + "; ".join(" ".join(g) for g in merged)
    )
    keep = [g[0] for g in groups]
    sub = X.restrict(keep)
    return FiniteMetricSpace(sub.names, sub.dist, sub.mode, merged)
