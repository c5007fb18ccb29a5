"""Apparent pairs of a filtration and the refinement relation between gradients."""

from dataclasses import dataclass
from typing import Optional

from complexes.filtration import Filtration
from complexes.simplex import Simplex, facets
from logging_config import get_logger
from morse.gradient import DiscreteGradient, Matching

logger = get_logger(__name__)


def max_facet(F: Filtration, tau: Simplex) -> Optional[Simplex]:
    return max(facets(tau), key=F.key, default=None)


def min_cofacet(F: Filtration, sigma: Simplex) -> Optional[Simplex]:
    return min(F.complex.cofacets(sigma), key=F.key, default=None)


def apparent_pairs(F: Filtration) -> Matching:
    """Pairs (sigma, tau) with sigma the largest facet of tau and tau the smallest cofacet of sigma."""
    pairs = []
    for tau in F.simplices:
        sigma = max_facet(F, tau)
        if sigma is not None and min_cofacet(F, sigma) == tau:
            pairs.append((sigma, tau))
    logger.debug(f"Found {len(pairs)} apparent pairs among {len(F)} simplices")
    return Matching(pairs)


def zero_persistence_apparent_pairs(F: Filtration) -> Matching:
    """Apparent pairs whose two simplices have the same diameter."""
    return apparent_pairs(F).restrict(lambda s, t: F.level(s) == F.level(t))


@dataclass(frozen=True)
class RefinementCheck:
    holds: bool
    witness: Optional[object] = None
    detail: str = ""


def refinement_check(coarse: DiscreteGradient, fine: Matching) -> RefinementCheck:
    """Whether the pairs of `fine` lie inside intervals of `coarse` and partition each one.

    Witness on failure: a pair outside every interval, a pair straddling two
    intervals, or a simplex of an interval no pair covers.
    """
    for sigma, tau in fine.pairs:
        home = coarse.interval_of(sigma)
        if home is None or tau not in home:
            return RefinementCheck(False, (sigma, tau), "pair is not inside a single interval")
    covered = fine.simplices()
    for interval in coarse.intervals:
        for psi in interval.simplices():
            if psi not in covered:
                return RefinementCheck(False, psi, f"{psi} of {interval.dump()} is not covered by a pair")
    return RefinementCheck(True)
