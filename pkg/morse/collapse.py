"""Elementary collapse sequences induced by discrete gradients."""

from collections import deque
from dataclasses import dataclass
import hashlib
from typing import Iterable, Optional

from complexes.rips import SimplicialComplex
from complexes.simplex import Simplex, VertexOrder, facets, is_facet
from errors import CertificateReplayError, CollapseStuckError
from logging_config import get_logger
from metric.space import FiniteMetricSpace
from morse.gradient import DiscreteGradient, minimal_vertex_refinement

logger = get_logger(__name__)


def complex_digest(simplices: Iterable[Simplex]) -> str:
    """Stable SHA-256 id of a simplex set."""
    h = hashlib.sha256()
    for sigma in sorted(simplices, key=lambda s: (len(s), s)):
        h.update((" ".join(map(str, sigma)) + "\n").encode("ascii"))
    return h.hexdigest()


@dataclass(frozen=True)
class CollapseCertificate:
    """Ordered elementary collapses (sigma, tau) leading from one complex to another."""

    steps: tuple[tuple[Simplex, Simplex], ...]
    start_id: str
    end_id: str

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def removed(self) -> int:
        return 2 * len(self.steps)

    def dump(self, space: Optional[FiniteMetricSpace] = None) -> str:
        def label(sigma: Simplex) -> str:
            return space.label(sigma) if space is not None else " ".join(map(str, sigma))

        lines = [f"{label(s)} ; {label(t)}" for s, t in self.steps]
        return "\n".join(lines) + ("\n" if lines else "")


class _LiveComplex:
    """Mutable copy of a complex tracking how many cofacets each simplex still has."""

    def __init__(self, K: SimplicialComplex):
        self.simplices: set[Simplex] = set(K.simplices)
        self.cofacet_count: dict[Simplex, int] = {s: 0 for s in self.simplices}
        for tau in self.simplices:
            for face in facets(tau):
                if face in self.cofacet_count:
                    self.cofacet_count[face] += 1

    def is_free_pair(self, sigma: Simplex, tau: Simplex) -> bool:
        return (
            sigma in self.simplices
            and tau in self.simplices
            and is_facet(sigma, tau)
            and self.cofacet_count[tau] == 0
            and self.cofacet_count[sigma] == 1
        )

    def remove(self, sigma: Simplex, tau: Simplex) -> list[Simplex]:
        """Remove the pair and return the faces whose cofacet count dropped."""
        touched = []
        for simplex in (tau, sigma):
            self.simplices.discard(simplex)
            for face in facets(simplex):
                if face in self.simplices:
                    self.cofacet_count[face] -= 1
                    touched.append(face)
        return touched


def collapse(
    K: SimplicialComplex,
    V: DiscreteGradient,
    L: SimplicialComplex,
    order: Optional[VertexOrder] = None,
) -> CollapseCertificate:
    """Greedy elementary-collapse sequence realizing K onto L.

    Pairs of the refined gradient are removed whenever the upper simplex is
    maximal in the live complex and is the only coface of the lower one.
    Removing a pair re-queues the pairs of the faces it exposed.

    Raises:
        CollapseStuckError: If no free pair remains before reaching L
    """
    matching = minimal_vertex_refinement(V, order)
    live = _LiveComplex(K)
    pair_of: dict[Simplex, tuple[Simplex, Simplex]] = {}
    for sigma, tau in matching.pairs:
        if sigma in L or tau in L or sigma not in live.simplices or tau not in live.simplices:
            continue
        pair_of[sigma] = pair_of[tau] = (sigma, tau)

    # Top-down start so most pairs are free on first visit
    queue = deque(sorted(set(pair_of.values()), key=lambda p: (-len(p[1]), p[1])))
    steps: list[tuple[Simplex, Simplex]] = []
    while queue:
        sigma, tau = queue.popleft()
        if not live.is_free_pair(sigma, tau):
            continue
        steps.append((sigma, tau))
        for face in live.remove(sigma, tau):
            if face in pair_of:
                queue.append(pair_of[face])

    target = set(L.simplices)
    if live.simplices != target:
        remaining = sorted(live.simplices - target, key=lambda s: (len(s), s))
        raise CollapseStuckError(
            f"collapse stuck with {len(remaining)} simplices outside the target", remaining
        )
    logger.debug(f"Collapsed {len(K)} -> {len(L)} simplices in {len(steps)} steps")
    return CollapseCertificate(tuple(steps), complex_digest(K.simplices), complex_digest(L.simplices))


def replay_certificate(K: SimplicialComplex, certificate: CollapseCertificate) -> frozenset[Simplex]:
    """Apply the steps to a fresh copy of K, checking each is an elementary collapse.

    Returns:
        The simplices left after the last step

    Raises:
        CertificateReplayError: On a digest mismatch or an invalid step
    """
    if complex_digest(K.simplices) != certificate.start_id:
        raise CertificateReplayError("start complex does not match the certificate", step=-1)
    live = _LiveComplex(K)
    for index, (sigma, tau) in enumerate(certificate.steps):
        if not live.is_free_pair(sigma, tau):
            raise CertificateReplayError(f"step {index} ({sigma} ; {tau}) is not a free pair", step=index)
        live.remove(sigma, tau)
    if complex_digest(live.simplices) != certificate.end_id:
        raise CertificateReplayError("end complex does not match the certificate", step=len(certificate.steps))
    return frozenset(live.simplices)
