"""Cone gradients collapsing Rips complexes of hyperbolic, nearly geodesic spaces.

Points are added one at a time in order of distance from a base point p. The
simplices that appear with the i-th point x_i form a stratum, and all of them
are paired off by adding or removing a single apex vertex z_i chosen among
the earlier points. Each stratum is therefore removed by elementary strong
collapses, and the strata assemble into one gradient.
"""

from dataclasses import dataclass, field
from typing import Iterable, Optional

from complexes.rips import SimplicialComplex, full_complex, rips_at_level
from complexes.simplex import Simplex, add_vertex, remove_vertex
from errors import InvalidParameterError, NoApexError, ThresholdError
from logging_config import get_logger
from metric.invariants import collapse_threshold, geodesic_defect, hyperbolicity
from metric.space import FiniteMetricSpace
from metric.values import Distance
from morse.gradient import DiscreteGradient, GradientInterval
from morse.validation import merge_gradients

logger = get_logger(__name__)


@dataclass(frozen=True)
class Stratum:
    """Simplices added with point x_i at one level, paired through a common apex."""

    level: int
    value: Distance
    index: int  # 1-based position of the vertex in the point order
    vertex: int
    apex: Optional[int]
    simplices: tuple[Simplex, ...]
    intervals: tuple[GradientInterval, ...]


@dataclass
class ConeResult:
    gradient: DiscreteGradient
    base_point: int
    point_order: tuple[int, ...]
    level: int
    strata: list[Stratum] = field(default_factory=list)


@dataclass
class FilteredConeResult:
    """Base cone gradient at the collapse threshold plus one gradient per higher level."""

    gradient: DiscreteGradient
    base_point: int
    point_order: tuple[int, ...]
    delta: Distance
    nu: Distance
    threshold: Distance
    base_level: int
    strata: list[Stratum] = field(default_factory=list)
    interval_level: dict[GradientInterval, int] = field(default_factory=dict)

    def between(self, lower: int, upper: int) -> DiscreteGradient:
        """Intervals collapsing VR at level `upper` onto VR at level `lower` (lower >= base)."""
        return self.gradient.restrict(
            lambda i: self.interval_level[i] > self.base_level and lower < self.interval_level[i] <= upper
        )

    def up_to(self, level: int) -> DiscreteGradient:
        """Intervals collapsing VR at `level` onto the base point (level >= base)."""
        return self.gradient.restrict(lambda i: self.interval_level[i] <= level)


def point_order(X: FiniteMetricSpace, p: int) -> tuple[int, ...]:
    """Points sorted by distance from p, ties by index; p comes first."""
    return tuple(sorted(range(X.n), key=lambda x: (X.level(p, x), x)))


def _check_base_point(X: FiniteMetricSpace, p: int) -> None:
    if not 0 <= p < X.n:
        raise InvalidParameterError(f"base point {p} is not a point of the space")


def _find_apex(
    X: FiniteMetricSpace,
    order: tuple[int, ...],
    i: int,
    level: int,
    strict: bool,
) -> Optional[int]:
    """First earlier point z coning off every neighbour of x_i at this level.

    (i) level(z, y) <= level for every y in X_i with level(y, x_i) <= level;
    (ii) when `strict`, level(z, y) < level whenever level(y, x_i) < level.
    """
    x = order[i - 1]
    members = order[:i]
    near = [y for y in members if X.level(y, x) <= level]
    closer = [y for y in members if X.level(y, x) < level]
    for z in order[: i - 1]:
        if any(X.level(z, y) > level for y in near):
            continue
        if strict and any(X.level(z, y) >= level for y in closer):
            continue
        return z
    return None


def _pair_stratum(simplices: list[Simplex], apex: int, level: int, index: int) -> tuple[GradientInterval, ...]:
    members = set(simplices)
    intervals = set()
    for sigma in simplices:
        lower, upper = (remove_vertex(sigma, apex), sigma) if apex in sigma else (sigma, add_vertex(sigma, apex))
        if lower not in members or upper not in members:
            raise NoApexError(
                f"apex {apex} does not pair {sigma} inside stratum {index}", index=index, level=level
            )
        intervals.add(GradientInterval(lower, upper))
    return tuple(sorted(intervals))


def _strata_by_vertex(simplices: Iterable[Simplex], order: tuple[int, ...]) -> dict[int, list[Simplex]]:
    """Group simplices by the 1-based position of their last vertex in `order`."""
    position = {v: k for k, v in enumerate(order, start=1)}
    groups: dict[int, list[Simplex]] = {}
    for sigma in simplices:
        groups.setdefault(max(position[v] for v in sigma), []).append(sigma)
    for group in groups.values():
        group.sort(key=lambda s: (len(s), s))
    return groups


def _base_strata(X: FiniteMetricSpace, K: SimplicialComplex, order: tuple[int, ...], level: int, t: Distance) -> list[Stratum]:
    p = order[0]
    strata = []
    for i, simplices in sorted(_strata_by_vertex(K.simplices, order).items()):
        x = order[i - 1]
        if i == 1:
            strata.append(Stratum(level, t, i, x, None, tuple(simplices), ()))
            continue
        apex = p if X.mode.lt(X.d(x, p), t) else _find_apex(X, order, i, level, strict=False)
        if apex is None:
            raise NoApexError(
                f"no apex for point '{X.names[x]}' (index {i}) at scale {t}: no earlier point is within "
                f"{t} of all its neighbours",
                index=i,
            )
        strata.append(Stratum(level, t, i, x, apex, tuple(simplices), _pair_stratum(simplices, apex, level, i)))
    return strata


def _parts_from_strata(strata: list[Stratum], floor: frozenset[Simplex], K: SimplicialComplex) -> list:
    parts = []
    cumulative = set(floor)
    for stratum in strata:
        cumulative.update(stratum.simplices)
        parts.append((SimplicialComplex(K.space, cumulative), DiscreteGradient(stratum.intervals)))
    return parts


def cone_gradient(
    X: FiniteMetricSpace,
    t: Distance,
    p: int = 0,
    force: bool = False,
) -> ConeResult:
    """Gradient collapsing VR_t(X) onto the base point p.

    Raises:
        ThresholdError: If t < 4*hyp(X) + 2*nu(X) and `force` is not set
        NoApexError: If some stratum admits no apex
    """
    _check_base_point(X, p)
    if not force:
        threshold = collapse_threshold(hyperbolicity(X).delta, geodesic_defect(X).nu)
        if X.mode.lt(t, threshold):
            raise ThresholdError(f"t = {t} is below 4*delta + 2*nu = {threshold}", t=t, threshold=threshold)
    else:
        logger.warning(f"Cone gradient at t={t} built without the threshold check")
    level = X.level_index(t)
    if level < 0:
        raise InvalidParameterError(f"t must be nonnegative, got {t}")
    order = point_order(X, p)
    K = rips_at_level(X, level)
    strata = _base_strata(X, K, order, level, t)
    gradient = merge_gradients(_parts_from_strata(strata, frozenset(), K))
    logger.debug(f"Cone gradient at t={t}: {len(gradient)} intervals over {len(strata)} strata")
    return ConeResult(gradient, p, order, level, strata)


def filtered_cone_gradient(
    X: FiniteMetricSpace,
    p: int = 0,
    full: Optional[SimplicialComplex] = None,
) -> FilteredConeResult:
    """Cone gradient at 4*delta + 2*nu assembled with one cone gradient per higher level.

    For a level r_m above the threshold the strata are the simplices of
    diameter exactly r_m, grouped by last vertex x_i; the apex must also keep
    every edge shorter than r_m shorter than r_m so that removing it never
    drops a simplex below diameter r_m.
    """
    _check_base_point(X, p)
    delta = hyperbolicity(X).delta
    nu = geodesic_defect(X).nu
    threshold = collapse_threshold(delta, nu)
    base_level = X.level_index(threshold)
    full = full or full_complex(X)
    order = point_order(X, p)

    base_complex = full.restrict_to_level(base_level)
    strata = _base_strata(X, base_complex, order, base_level, threshold)
    parts = _parts_from_strata(strata, frozenset(), base_complex)
    interval_level = {i: base_level for s in strata for i in s.intervals}

    for level in range(base_level + 1, len(X.levels)):
        value = X.levels[level]
        floor = frozenset(s for s in full.simplices if X.diameter_level(s) < level)
        exact = [s for s in full.simplices if X.diameter_level(s) == level]
        level_strata = []
        for i, simplices in sorted(_strata_by_vertex(exact, order).items()):
            x = order[i - 1]
            apex = p if X.level(x, p) < level else _find_apex(X, order, i, level, strict=True)
            if apex is None:
                raise NoApexError(
                    f"no apex for point '{X.names[x]}' (index {i}) at level {value}", index=i, level=level
                )
            level_strata.append(
                Stratum(level, value, i, x, apex, tuple(simplices), _pair_stratum(simplices, apex, level, i))
            )
        parts.extend(_parts_from_strata(level_strata, floor, full))
        interval_level.update({i: level for s in level_strata for i in s.intervals})
        strata.extend(level_strata)

    gradient = merge_gradients(parts)
    logger.debug(
        f"Filtered cone gradient: threshold {threshold} (level {base_level}), {len(gradient)} intervals"
    )
    return FilteredConeResult(gradient, p, order, delta, nu, threshold, base_level, strata, interval_level)
