"""Z/2 persistent homology by column reduction, with the apparent-pair shortcut.

Columns are processed in filtration order. The column of the upper simplex
of an apparent pair is already reduced (its lowest one is the partner), and
the column of the lower simplex reduces to zero, so with the shortcut both
are settled without a single column addition and counted as skipped.
"""

from dataclasses import dataclass, field
from typing import Optional

from complexes.filtration import Filtration
from complexes.simplex import Simplex, add_vertex
from config import REDUCTION_BUDGET
from errors import BudgetExceededError, InvalidParameterError
from gradients.apparent import apparent_pairs, max_facet
from logging_config import get_logger
from metric.values import Distance, to_json_number
from morse.gradient import Matching
from persistence.boundary import BoundaryMatrix, add_into, lowest_one

logger = get_logger(__name__)

Interval = tuple[Distance, Optional[Distance]]


@dataclass
class Barcode:
    """Persistence intervals per degree; `None` as death means infinite."""

    intervals: dict[int, list[Interval]] = field(default_factory=dict)
    zero_length: dict[int, list[tuple[Distance, Distance]]] = field(default_factory=dict)

    def degree(self, k: int) -> list[Interval]:
        return self.intervals.get(k, [])

    def to_json(self, include_zero_length: bool = False) -> dict[str, list[list]]:
        payload: dict[str, list[list]] = {}
        for k in sorted(set(self.intervals) | (set(self.zero_length) if include_zero_length else set())):
            rows = list(self.degree(k))
            if include_zero_length:
                rows.extend(self.zero_length.get(k, []))
            payload[str(k)] = [
                [to_json_number(b), None if d is None else to_json_number(d)] for b, d in sorted(rows, key=_interval_key)
            ]
        return payload

    def table(self) -> str:
        lines = ["degree  birth  death"]
        for k in sorted(self.intervals):
            for birth, death in sorted(self.intervals[k], key=_interval_key):
                lines.append(f"{k:>6}  {birth}  {'inf' if death is None else death}")
        return "\n".join(lines) + "\n"


def _interval_key(interval: Interval) -> tuple:
    birth, death = interval
    return (birth, death is None, death if death is not None else 0)


@dataclass
class DegreeStats:
    columns: int = 0
    apparent_skipped: int = 0
    reduced: int = 0
    critical: int = 0
    additions: int = 0

    def to_json(self) -> dict[str, int]:
        return {
            "columns": self.columns,
            "apparent_skipped": self.apparent_skipped,
            "additions": self.additions,
            "critical": self.critical,
            "reduced": self.reduced,
        }


@dataclass
class ReductionStats:
    """Column accounting; the column of a k-simplex counts toward degree max(k-1, 0)."""

    per_degree: dict[int, DegreeStats] = field(default_factory=dict)

    def at(self, degree: int) -> DegreeStats:
        return self.per_degree.setdefault(degree, DegreeStats())

    @property
    def total(self) -> DegreeStats:
        total = DegreeStats()
        for stats in self.per_degree.values():
            total.columns += stats.columns
            total.apparent_skipped += stats.apparent_skipped
            total.reduced += stats.reduced
            total.critical += stats.critical
            total.additions += stats.additions
        return total

    def additions_from(self, degree: int) -> int:
        return sum(s.additions for k, s in self.per_degree.items() if k >= degree)

    def to_json(self) -> dict:
        payload: dict = self.total.to_json()
        payload["per_degree"] = {str(k): s.to_json() for k, s in sorted(self.per_degree.items())}
        return payload


@dataclass
class PersistenceResult:
    barcode: Barcode
    stats: ReductionStats
    pairs: list[tuple[Simplex, Simplex]]
    apparent: Matching


def _virtual_apparent_lowers(F: Filtration) -> set[Simplex]:
    """Top-dimensional simplices of a capped filtration that are lower ends of apparent pairs.

    Their cofacets are not materialized, so the smallest one is found from the
    metric among the extensions staying inside the complex's scale.
    """
    cap = F.complex.dim_cap
    if cap is None:
        return set()
    X = F.space
    top_level = max((F.level(s) for s in F.simplices), default=0)
    lowers = set()
    for sigma in F.simplices:
        if len(sigma) != cap + 1:
            continue
        candidates = [add_vertex(sigma, w) for w in range(X.n) if w not in sigma]
        candidates = [tau for tau in candidates if F.level(tau) <= top_level]
        if not candidates:
            continue
        tau = min(candidates, key=F.key)
        if max_facet(F, tau) == sigma:
            lowers.add(sigma)
    return lowers


def persistent_homology(
    F: Filtration,
    max_degree: int = 1,
    use_shortcut: bool = True,
    budget: Optional[int] = None,
) -> PersistenceResult:
    """Barcode through `max_degree` plus reduction statistics.

    Raises:
        InvalidParameterError: If the filtration is capped below max_degree + 1
        BudgetExceededError: If the filtration has more columns than `budget`
    """
    budget = REDUCTION_BUDGET if budget is None else budget
    if max_degree < 0:
        raise InvalidParameterError(f"max_degree must be nonnegative, got {max_degree}")
    cap = F.complex.dim_cap
    if cap is not None and cap < max_degree + 1:
        raise InvalidParameterError(f"filtration capped at dimension {cap}, degree {max_degree} needs {max_degree + 1}")
    if len(F) > budget:
        raise BudgetExceededError(f"filtration has {len(F)} columns, budget is {budget}", limit=budget, requested=len(F))

    matrix = BoundaryMatrix.from_filtration(F)
    position = F.position
    apparent = apparent_pairs(F)
    upper_to_lower: dict[int, int] = {}
    skipped_lower: set[int] = set()
    if use_shortcut:
        for sigma, tau in apparent.pairs:
            upper_to_lower[position[tau]] = position[sigma]
            skipped_lower.add(position[sigma])
        skipped_lower.update(position[s] for s in _virtual_apparent_lowers(F))

    stats = ReductionStats()
    owner_of_low: dict[int, int] = {}
    reduced: dict[int, set[int]] = {}
    index_pairs: list[tuple[int, int]] = []
    for j in range(matrix.size):
        degree_stats = stats.at(max(matrix.dimension(j) - 1, 0))
        degree_stats.columns += 1
        if j in upper_to_lower:
            i = upper_to_lower[j]
            owner_of_low[i] = j
            reduced[j] = matrix.boundary(j)
            index_pairs.append((i, j))
            degree_stats.apparent_skipped += 1
            continue
        if j in skipped_lower:
            degree_stats.apparent_skipped += 1
            continue
        column = matrix.boundary(j)
        additions = 0
        while column:
            low = lowest_one(column)
            assert low is not None
            if low not in owner_of_low:
                break
            add_into(column, reduced[owner_of_low[low]])
            additions += 1
        degree_stats.additions += additions
        if additions:
            degree_stats.reduced += 1
        else:
            degree_stats.critical += 1
        if column:
            low = lowest_one(column)
            assert low is not None
            owner_of_low[low] = j
            reduced[j] = column
            index_pairs.append((low, j))

    simplices = matrix.simplices
    barcode = Barcode()
    killed = set(owner_of_low)
    for i, j in index_pairs:
        k = len(simplices[i]) - 1
        if k > max_degree:
            continue
        birth, death = F.diameter(simplices[i]), F.diameter(simplices[j])
        if F.level(simplices[i]) == F.level(simplices[j]):
            barcode.zero_length.setdefault(k, []).append((birth, death))
        else:
            barcode.intervals.setdefault(k, []).append((birth, death))
    negative = {j for _, j in index_pairs}
    for j, sigma in enumerate(simplices):
        k = len(sigma) - 1
        if k <= max_degree and j not in killed and j not in negative:
            barcode.intervals.setdefault(k, []).append((F.diameter(sigma), None))
    for k in range(max_degree + 1):
        barcode.intervals.setdefault(k, [])

    total = stats.total
    logger.debug(
        f"Reduced {total.columns} columns: {total.apparent_skipped} apparent, "
        f"{total.additions} additions, {total.critical} critical"
    )
    return PersistenceResult(barcode, stats, [(simplices[i], simplices[j]) for i, j in index_pairs], apparent)
