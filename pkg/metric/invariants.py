"""Gromov hyperbolicity and geodesic defect of finite metric spaces."""

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from errors import InvalidParameterError
from logging_config import get_logger
from metric.space import FiniteMetricSpace
from metric.values import Distance, NumericMode

logger = get_logger(__name__)


@dataclass(frozen=True)
class HyperbolicityReport:
    delta: Distance
    witness: Optional[tuple[int, int, int, int]]
    mode: NumericMode


@dataclass(frozen=True)
class DefectReport:
    nu: Distance
    witness: Optional[tuple[int, int, Distance]]  # (x, y, r)
    mode: NumericMode


@dataclass(frozen=True)
class GeodesicCheck:
    holds: bool
    witness: Optional[tuple[int, int, Distance]] = None


def four_point_excess(X: FiniteMetricSpace, w: int, x: int, y: int, z: int) -> Distance:
    """(largest - second largest pairing sum) / 2 for the points w, x, y, z."""
    sums = sorted((X.d(w, x) + X.d(y, z), X.d(w, y) + X.d(x, z), X.d(w, z) + X.d(x, y)))
    return (sums[2] - sums[1]) / 2


def hyperbolicity(X: FiniteMetricSpace) -> HyperbolicityReport:
    """Least delta for which X satisfies the four-point condition.

    Scans unordered 4-subsets; the witness is the first subset (in
    lexicographic order) attaining the maximum.
    """
    delta = X.mode.zero
    witness: Optional[tuple[int, int, int, int]] = None
    for quad in combinations(range(X.n), 4):
        excess = four_point_excess(X, *quad)
        if witness is None or X.mode.lt(delta, excess):
            delta, witness = excess, quad  # type: ignore[assignment]
    logger.debug(f"Hyperbolicity of {X.n}-point space: {delta}")
    return HyperbolicityReport(delta, witness, X.mode.kind)


def defect_envelope(X: FiniteMetricSpace, x: int, y: int, r: Distance) -> Distance:
    """min over z of max(d(x,z) - r, d(y,z) - d(x,y) + r)."""
    d = X.d(x, y)
    return min(max(X.d(x, z) - r, X.d(y, z) - d + r) for z in range(X.n))


def _candidate_splits(X: FiniteMetricSpace, x: int, y: int) -> list[Distance]:
    """Endpoints of [0, d] plus every crossing of a falling and a rising envelope line."""
    d = X.d(x, y)
    zero = X.mode.zero
    candidates = {zero, d}
    for z in range(X.n):
        for w in range(X.n):
            r = (X.d(x, z) - X.d(y, w) + d) / 2
            candidates.add(min(max(r, zero), d))
    return sorted(candidates)


def pair_defect(X: FiniteMetricSpace, x: int, y: int) -> tuple[Distance, Distance]:
    """Maximum of the envelope for the pair (x, y) and the smallest split attaining it."""
    best: Optional[Distance] = None
    best_r = X.mode.zero
    for r in _candidate_splits(X, x, y):
        value = defect_envelope(X, x, y, r)
        if best is None or X.mode.lt(best, value):
            best, best_r = value, r
    assert best is not None
    return best, best_r


def geodesic_defect(X: FiniteMetricSpace) -> DefectReport:
    """Exact geodesic defect of a finite space.

    The envelope of each pair is piecewise linear, so its maximum sits at an
    endpoint of [0, d] or at a crossing of two envelope lines. Unordered
    pairs suffice since swapping x and y mirrors r to d - r. Ties keep the
    smallest pair, then the smallest r.
    """
    nu = X.mode.zero
    witness: Optional[tuple[int, int, Distance]] = None
    for x, y in combinations(range(X.n), 2):
        value, r = pair_defect(X, x, y)
        if witness is None or X.mode.lt(nu, value):
            nu, witness = value, (x, y, r)
    logger.debug(f"Geodesic defect of {X.n}-point space: {nu}")
    return DefectReport(nu, witness, X.mode.kind)


def is_nu_geodesic(X: FiniteMetricSpace, nu: Distance) -> GeodesicCheck:
    """Whether every pair and split admits a point z within the slack `nu`.

    On failure the witness (x, y, r) is a split whose envelope exceeds `nu`,
    taken from the farthest failing pair; among equally far pairs the
    smallest wins.
    """
    if nu < 0:
        raise InvalidParameterError(f"nu must be nonnegative, got {nu}")
    witness: Optional[tuple[int, int, Distance]] = None
    for x, y in combinations(range(X.n), 2):
        value, r = pair_defect(X, x, y)
        if not X.mode.lt(nu, value):
            continue
        if witness is None or X.mode.lt(X.d(witness[0], witness[1]), X.d(x, y)):
            witness = (x, y, r)
    return GeodesicCheck(witness is None, witness)


def collapse_threshold(delta: Distance, nu: Distance) -> Distance:
    """Scale 4*delta + 2*nu above which Rips complexes collapse to a point."""
    return 4 * delta + 2 * nu
