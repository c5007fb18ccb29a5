"""Independent homology computations used to cross-check collapses and barcodes."""

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

import networkx as nx
import numpy as np

from complexes.filtration import Filtration
from complexes.rips import SimplicialComplex, full_complex
from complexes.simplex import facets
from config import ORACLE_BUDGET
from errors import BudgetExceededError, InvalidParameterError
from logging_config import get_logger
from metric.space import FiniteMetricSpace
from metric.values import Distance
from persistence.reduction import Barcode, Interval, persistent_homology

logger = get_logger(__name__)


def gf2_rank(matrix: np.ndarray) -> int:
    """Rank over Z/2 of a boolean matrix by row elimination."""
    M = np.array(matrix, dtype=bool, copy=True)
    if M.size == 0:
        return 0
    rows, cols = M.shape
    rank = 0
    for c in range(cols):
        candidates = np.nonzero(M[rank:, c])[0]
        if candidates.size == 0:
            continue
        pivot = rank + int(candidates[0])
        if pivot != rank:
            M[[rank, pivot]] = M[[pivot, rank]]
        hits = np.nonzero(M[:, c])[0]
        hits = hits[hits != rank]
        M[hits] ^= M[rank]
        rank += 1
        if rank == rows:
            break
    return rank


def boundary_matrix(K: SimplicialComplex, k: int) -> np.ndarray:
    """Boolean matrix of the boundary map from k-simplices to (k-1)-simplices."""
    rows = K.by_dimension(k - 1) if k > 0 else []
    cols = K.by_dimension(k)
    row_index = {sigma: i for i, sigma in enumerate(rows)}
    M = np.zeros((len(rows), len(cols)), dtype=bool)
    if k == 0:
        return M
    for j, tau in enumerate(cols):
        for face in facets(tau):
            M[row_index[face], j] = True
    return M


def homology_oracle(K: SimplicialComplex, budget: Optional[int] = None) -> list[int]:
    """Z/2 Betti numbers of K in degrees 0..dim K.

    Raises:
        BudgetExceededError: If K has more simplices than `budget`
    """
    budget = ORACLE_BUDGET if budget is None else budget
    if len(K) > budget:
        raise BudgetExceededError(
            f"homology oracle refuses {len(K)} simplices, budget is {budget}", limit=budget, requested=len(K)
        )
    top = K.dimension
    if top < 0:
        return []
    ranks = [gf2_rank(boundary_matrix(K, k)) for k in range(top + 2)]
    betti = [len(K.by_dimension(k)) - ranks[k] - ranks[k + 1] for k in range(top + 1)]
    logger.debug(f"Betti numbers of {len(K)} simplices: {betti}")
    return betti


def union_find_barcode(X: FiniteMetricSpace) -> list[Interval]:
    """Degree-0 barcode of the Rips filtration from a union-find pass over sorted edges."""
    if X.n == 0:
        return []
    edges = sorted(combinations(range(X.n), 2), key=lambda e: (X.level(*e), e))
    components = nx.utils.UnionFind(range(X.n))
    intervals: list[Interval] = []
    for u, v in edges:
        if components[u] != components[v]:
            components.union(u, v)
            intervals.append((X.mode.zero, X.d(u, v)))
    intervals.append((X.mode.zero, None))
    return intervals


@dataclass(frozen=True)
class SurjectivityCheck:
    holds: bool
    bound: Distance
    witness: Optional[Interval] = None


def h1_surjectivity_check(
    X: FiniteMetricSpace,
    nu: Distance,
    barcode: Optional[Barcode] = None,
) -> SurjectivityCheck:
    """Whether every degree-1 class of the Rips filtration is born at scale at most 2*nu."""
    if X.mode.lt(nu, X.mode.zero):
        raise InvalidParameterError(f"nu must be nonnegative, got {nu}")
    if barcode is None:
        F = Filtration(full_complex(X, dim_cap=2))
        barcode = persistent_homology(F, max_degree=1).barcode
    bound = 2 * nu
    for interval in sorted(barcode.degree(1), key=lambda i: i[0]):
        if X.mode.lt(bound, interval[0]):
            return SurjectivityCheck(False, bound, interval)
    return SurjectivityCheck(True, bound)
