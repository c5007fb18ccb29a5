"""Gradient validation, union of gradients and critical cells."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional, Sequence

import networkx as nx

from complexes.rips import SimplicialComplex, euler_characteristic
from complexes.simplex import Simplex, VertexOrder, facets
from errors import MergeHypothesisError
from logging_config import get_logger
from morse.gradient import DiscreteGradient, GradientInterval, minimal_vertex_refinement

logger = get_logger(__name__)


class Check(str, Enum):
    DISJOINT = "disjoint"
    REGULAR = "regular"
    CONTAINED = "contained"
    PARTITION = "partition"
    ACYCLIC = "acyclic"
    DIAMETER = "diameter"


@dataclass
class CheckResult:
    check: Check
    passed: bool
    detail: str = ""
    witness: Any = None


@dataclass
class GradientReport:
    results: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if not r.passed]

    def __getitem__(self, check: Check) -> CheckResult:
        for result in self.results:
            if result.check is check:
                return result
        raise KeyError(check)

    def summary(self) -> str:
        return ", ".join(f"{r.check.value}={'ok' if r.passed else 'FAIL'}" for r in self.results)


def _simplex_key(sigma: Simplex) -> tuple[int, Simplex]:
    return (len(sigma), sigma)


def validate_gradient(
    K: SimplicialComplex,
    V: DiscreteGradient,
    L: Optional[SimplicialComplex] = None,
    order: Optional[VertexOrder] = None,
    check_diameter: bool = True,
) -> GradientReport:
    """Run every gradient check; failures are report entries, never exceptions.

    Checks: disjoint intervals, regular intervals, intervals inside K, (with L)
    intervals covering exactly K minus L, acyclic refined matching, and (with
    `check_diameter`) equal diameters at both ends of every interval. Cone
    gradients of one complex and apparent pairs of positive persistence pair
    simplices of different diameters; pass `check_diameter=False` for them.
    """
    report = GradientReport()
    order = order or V.order or VertexOrder.identity(K.space.n)

    # (a) disjointness
    owner: dict[Simplex, GradientInterval] = {}
    clash = None
    for interval in V.intervals:
        for sigma in interval.simplices():
            if sigma in owner:
                clash = (sigma, owner[sigma], interval)
                break
            owner[sigma] = interval
        if clash:
            break
    if clash:
        sigma, first, second = clash
        report.results.append(
            CheckResult(Check.DISJOINT, False, f"{sigma} lies in {first.dump()} and {second.dump()}", clash)
        )
    else:
        report.results.append(CheckResult(Check.DISJOINT, True))

    # (b) regularity
    degenerate = next((i for i in V.intervals if i.rho == i.phi), None)
    report.results.append(
        CheckResult(Check.REGULAR, degenerate is None, "" if degenerate is None else "degenerate interval", degenerate)
    )

    # (c) containment
    outside = sorted((s for s in owner if s not in K), key=_simplex_key)
    report.results.append(
        CheckResult(
            Check.CONTAINED,
            not outside,
            f"{outside[0]} is not in the complex" if outside else "",
            outside[0] if outside else None,
        )
    )

    # (d) partition of K minus L
    if L is not None:
        uncovered = sorted((s for s in K.simplices if s not in L and s not in owner), key=_simplex_key)
        inside_l = sorted((s for s in owner if s in L), key=_simplex_key)
        if uncovered:
            report.results.append(
                CheckResult(Check.PARTITION, False, f"{uncovered[0]} is neither in L nor covered", uncovered[0])
            )
        elif inside_l:
            report.results.append(
                CheckResult(Check.PARTITION, False, f"{inside_l[0]} is covered but lies in L", inside_l[0])
            )
        else:
            report.results.append(CheckResult(Check.PARTITION, True))

    # (e) acyclicity of the refined matching
    if clash:
        report.results.append(CheckResult(Check.ACYCLIC, False, "skipped: intervals overlap"))
    else:
        cycle = find_gradient_cycle(minimal_vertex_refinement(V, order).lower())
        report.results.append(
            CheckResult(Check.ACYCLIC, cycle is None, "" if cycle is None else "gradient path closes up", cycle)
        )

    # (f) diameter compatibility
    if check_diameter:
        space = K.space
        mismatch = next(
            (i for i in V.intervals if space.diameter_level(i.rho) != space.diameter_level(i.phi)), None
        )
        report.results.append(
            CheckResult(
                Check.DIAMETER,
                mismatch is None,
                "" if mismatch is None else f"{mismatch.dump()} spans two diameters",
                mismatch,
            )
        )

    logger.debug(f"Validated {len(V)} intervals on {len(K)} simplices: {report.summary()}")
    return report


def find_gradient_cycle(lower_to_upper: dict[Simplex, Simplex]) -> Optional[list[Simplex]]:
    """Closed gradient path of a matching, or None when the matching is acyclic.

    Nodes are matched lower simplices; sigma -> sigma' when sigma' is another
    facet of sigma's partner and is itself matched upward. Any cycle of the
    modified Hasse diagram passes only through such nodes.
    """
    G = nx.DiGraph()
    G.add_nodes_from(lower_to_upper)
    for sigma, tau in lower_to_upper.items():
        for face in facets(tau):
            if face != sigma and face in lower_to_upper:
                G.add_edge(sigma, face)
    try:
        edges = nx.find_cycle(G)
    except nx.NetworkXNoCycle:
        return None
    return [edge[0] for edge in edges]


def critical_cells(V: DiscreteGradient, K: SimplicialComplex) -> list[Simplex]:
    """Simplices of K in no interval of V, by dimension then index."""
    return sorted((s for s in K.simplices if V.is_critical(s)), key=_simplex_key)


def merge_gradients(parts: Sequence[tuple[SimplicialComplex, DiscreteGradient]]) -> DiscreteGradient:
    """Union of gradients on subcomplexes covering their union.

    Every simplex must lie in a unique minimal part and be critical for the
    gradients of all other parts containing it. Both hypotheses are checked
    for every simplex of the union.

    Raises:
        MergeHypothesisError: With the failing simplex and the two parts involved
    """
    if not parts:
        return DiscreteGradient(())
    for index, (complex_, gradient) in enumerate(parts):
        for interval in gradient.intervals:
            if interval.phi not in complex_ or interval.rho not in complex_:
                raise MergeHypothesisError(
                    f"interval {interval.dump()} of part {index} leaves its subcomplex", interval.phi, (index,)
                )

    subset_memo: dict[tuple[int, int], bool] = {}

    def contained(a: int, b: int) -> bool:
        if (a, b) not in subset_memo:
            subset_memo[(a, b)] = parts[a][0].simplices <= parts[b][0].simplices
        return subset_memo[(a, b)]

    chain = _chain_order(parts)
    everything = frozenset().union(*(p[0].simplices for p in parts))
    for sigma in sorted(everything, key=_simplex_key):
        holders = [k for k in range(len(parts)) if sigma in parts[k][0]]
        if chain is not None:
            minimal = min(holders, key=chain.index)
        else:
            minima = [a for a in holders if not any(b != a and contained(b, a) and not contained(a, b) for b in holders)]
            if len(minima) != 1 or any(not contained(minima[0], b) for b in holders):
                raise MergeHypothesisError(
                    f"{sigma} has no unique minimal part among {holders}", sigma, tuple(holders[:2])
                )
            minimal = minima[0]
        for other in holders:
            if other != minimal and not parts[other][1].is_critical(sigma):
                raise MergeHypothesisError(
                    f"{sigma} is paired by part {other} although part {minimal} is its minimal part",
                    sigma,
                    (minimal, other),
                )
    merged = DiscreteGradient(
        [i for _, gradient in parts for i in gradient.intervals],
        next((g.order for _, g in parts if g.order is not None), None),
    )
    logger.debug(f"Merged {len(parts)} parts into {len(merged)} intervals")
    return merged


def _chain_order(parts: Sequence[tuple[SimplicialComplex, DiscreteGradient]]) -> Optional[list[int]]:
    """Part indices from smallest to largest when the parts are strictly nested, else None."""
    ranked = sorted(range(len(parts)), key=lambda k: len(parts[k][0]))
    for a, b in zip(ranked, ranked[1:]):
        small, large = parts[a][0].simplices, parts[b][0].simplices
        if len(small) == len(large) or not small <= large:
            return None
    return ranked


__all__ = [
    "Check",
    "CheckResult",
    "GradientReport",
    "validate_gradient",
    "find_gradient_cycle",
    "critical_cells",
    "euler_characteristic",
    "merge_gradients",
]
