"""Verification pipelines: construct a gradient, validate it, collapse, compare homology.

Every pipeline returns its results and a list of assertions. Failed checks
become failed assertions carrying a witness; only errors that make a
pipeline meaningless (bad input, unmet preconditions, budgets) propagate.
"""

from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Any, Callable, Optional

import numpy as np

from cli.io import number, require_desk_scale, simplex_label, simplex_list
from cli.models import AssertionResult
from complexes.filtration import Filtration, SimplexOrdering
from complexes.rips import SimplicialComplex, euler_characteristic, full_complex, subforest
from complexes.simplex import Simplex, VertexOrder
from config import DEFAULT_SEED
from errors import CertificateReplayError, CollapseStuckError, GenericityError, InvalidParameterError
from gradients.apparent import refinement_check, zero_persistence_apparent_pairs
from gradients.cone import cone_gradient, filtered_cone_gradient
from gradients.tree import canonical_gradient, generic_gradient, perturbed_gradient, require_tree_metric, tree_complex
from logging_config import get_logger
from metric.invariants import geodesic_defect
from metric.space import FiniteMetricSpace
from metric.trees import WeightedTree, compatible_order, require_compatible
from metric.values import Distance, format_value
from morse.collapse import collapse, replay_certificate
from morse.gradient import DiscreteGradient, GradientInterval, minimal_vertex_refinement
from morse.validation import GradientReport, critical_cells, validate_gradient
from persistence.oracle import h1_surjectivity_check, homology_oracle
from persistence.reduction import persistent_homology

logger = get_logger(__name__)

# Random orders tried per generic tree in the refinement pipeline
GENERIC_ORDER_TRIALS = 5


class Pipeline(str, Enum):
    THEOREM1 = "theorem1"
    THEOREM2 = "theorem2"
    CANONICAL = "canonical"
    PERTURBED = "perturbed"
    REFINEMENT = "refinement"
    H1_SURJECTIVITY = "h1-surjectivity"
    APPARENT_COLLAPSE = "apparent-collapse"


@dataclass
class PipelineOptions:
    t: Optional[Distance] = None
    u: Optional[Distance] = None
    base_point: int = 0
    order: Optional[VertexOrder] = None
    root: Optional[int] = None
    seed: int = DEFAULT_SEED
    budget: Optional[int] = None
    allow_incompatible: bool = False


@dataclass
class PipelineOutcome:
    results: dict[str, Any] = field(default_factory=dict)
    assertions: list[AssertionResult] = field(default_factory=list)

    def check(self, name: str, passed: bool, detail: str = "", witness: Any = None) -> bool:
        if not passed:
            logger.error(f"Check {name} failed: {detail}")
        self.assertions.append(AssertionResult(name=name, passed=passed, detail="" if passed else detail, witness=witness))
        return passed

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.assertions)


# === Shared checks ===


def jsonable(X: FiniteMetricSpace, obj: Any) -> Any:
    """Witness objects in JSON form, with simplices as lists of point names."""
    if isinstance(obj, GradientInterval):
        return [jsonable(X, obj.rho), jsonable(X, obj.phi)]
    if isinstance(obj, tuple) and obj and all(isinstance(v, int) for v in obj):
        return [X.names[v] for v in obj]
    if isinstance(obj, (list, tuple)):
        return [jsonable(X, item) for item in obj]
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    try:
        return number(obj)
    except (TypeError, ValueError):
        return str(obj)


class BettiCache:
    """Memoized homology oracle over complexes of one run."""

    def __init__(self) -> None:
        self._memo: dict[SimplicialComplex, list[int]] = {}

    def __call__(self, K: SimplicialComplex) -> list[int]:
        if K not in self._memo:
            self._memo[K] = homology_oracle(K)
        return self._memo[K]


def _same_homology(a: list[int], b: list[int]) -> bool:
    size = max(len(a), len(b))
    return a + [0] * (size - len(a)) == b + [0] * (size - len(b))


def add_gradient_checks(out: PipelineOutcome, prefix: str, report: GradientReport, X: FiniteMetricSpace) -> None:
    for result in report.results:
        out.check(f"{prefix}.{result.check.value}", result.passed, result.detail, jsonable(X, result.witness))


def add_euler_check(out: PipelineOutcome, prefix: str, V: DiscreteGradient, K: SimplicialComplex) -> None:
    critical = critical_cells(V, K)
    chi_k, chi_c = K.euler_characteristic(), euler_characteristic(critical)
    out.check(f"{prefix}.euler", chi_k == chi_c, f"chi(K) = {chi_k} but chi(critical) = {chi_c}")


def add_collapse_checks(
    out: PipelineOutcome,
    name: str,
    K: SimplicialComplex,
    V: DiscreteGradient,
    L: SimplicialComplex,
    betti: BettiCache,
    order: Optional[VertexOrder] = None,
) -> None:
    """Collapse K onto L along V, replay the certificate and compare homology."""
    X = K.space
    try:
        certificate = collapse(K, V, L, order)
    except CollapseStuckError as exc:
        out.check(f"{name}.collapses", False, exc.message, simplex_list(X, exc.remaining[:10]))
        return
    out.check(f"{name}.collapses", True)
    try:
        replay_certificate(K, certificate)
        out.check(f"{name}.replay", True)
    except CertificateReplayError as exc:
        out.check(f"{name}.replay", False, exc.message, exc.step)
    before, after = betti(K), betti(L)
    out.check(f"{name}.homology", _same_homology(before, after), f"Betti numbers {before} != {after}", [before, after])


def _point(X: FiniteMetricSpace, p: int) -> SimplicialComplex:
    return SimplicialComplex(X, [(p,)])


def _tree_of(X: FiniteMetricSpace, tree: Optional[WeightedTree]) -> WeightedTree:
    recovered = require_tree_metric(X)
    return tree if tree is not None else recovered


def tree_order(T: WeightedTree, order: Optional[VertexOrder], root: Optional[int], allow_incompatible: bool) -> VertexOrder:
    """The supplied order, checked against the rooted tree, or the compatible order.

    Raises:
        CompatibilityError: if the order does not extend the tree order and
            `allow_incompatible` is not set
    """
    if order is None:
        return compatible_order(T, root)
    if allow_incompatible:
        logger.warning("Skipping the compatibility check of the supplied vertex order")
    else:
        require_compatible(T, order, root)
    return order


def _level_name(X: FiniteMetricSpace, level: int) -> str:
    return format_value(X.levels[level])


# === Pipelines ===


def verify_theorem1(X: FiniteMetricSpace, options: PipelineOptions) -> PipelineOutcome:
    """Filtered cone gradient collapses VR_u onto VR_t above 4*delta + 2*nu, and onto a point."""
    out = PipelineOutcome()
    p = options.base_point
    full = full_complex(X, budget=options.budget)
    result = filtered_cone_gradient(X, p, full)
    point = _point(X, p)
    betti = BettiCache()

    add_gradient_checks(out, "filtered_cone", validate_gradient(full, result.gradient, point, check_diameter=False), X)
    base = full.restrict_to_level(result.base_level)
    above = result.between(result.base_level, len(X.levels) - 1)
    add_gradient_checks(out, "filtered_cone.levels", validate_gradient(full, above, base), X)
    add_euler_check(out, "filtered_cone", result.gradient, full)
    critical = critical_cells(result.gradient, full)
    out.check("filtered_cone.critical", critical == [(p,)], "critical cells are not the base point", simplex_list(X, critical))

    for level in range(len(X.levels) - 1, result.base_level, -1):
        K = full.restrict_to_level(level)
        L = full.restrict_to_level(level - 1)
        add_collapse_checks(out, f"collapse.{_level_name(X, level)}", K, result.between(level - 1, level), L, betti)
    add_collapse_checks(out, "collapse.base", base, result.up_to(result.base_level), point, betti)

    out.results.update(
        {
            "delta": number(result.delta),
            "nu": number(result.nu),
            "threshold": number(result.threshold),
            "base_level": number(X.levels[result.base_level]),
            "levels_above_base": len(X.levels) - 1 - result.base_level,
            "intervals": len(result.gradient),
            "strata": len(result.strata),
            "point_order": [X.names[v] for v in result.point_order],
        }
    )

    if options.t is not None:
        cone = cone_gradient(X, options.t, p)
        K = full.restrict_to_level(cone.level)
        add_gradient_checks(out, "cone", validate_gradient(K, cone.gradient, point, check_diameter=False), X)
        add_collapse_checks(out, f"cone.{format_value(options.t)}", K, cone.gradient, point, betti)
        out.results["t"] = number(options.t)
        out.results["cone_intervals"] = len(cone.gradient)
    return out


def verify_theorem2(X: FiniteMetricSpace, tree: Optional[WeightedTree], options: PipelineOptions) -> PipelineOutcome:
    """Zero-persistence apparent pairs under a compatible order collapse VR_u onto VR_t plus the subforest."""
    out = PipelineOutcome()
    T = _tree_of(X, tree)
    order = tree_order(T, options.order, options.root, options.allow_incompatible)
    full = full_complex(X, budget=options.budget)
    F = Filtration(full, order)
    matching = zero_persistence_apparent_pairs(F)
    V = DiscreteGradient.from_matching(matching, order)
    skeleton = tree_complex(X, T)
    betti = BettiCache()

    add_gradient_checks(out, "apparent_zero", validate_gradient(full, V, skeleton, order), X)
    add_euler_check(out, "apparent_zero", V, full)
    critical = critical_cells(V, full)
    expected = sorted(skeleton.simplices, key=lambda s: (len(s), s))
    extra = [s for s in critical if s not in skeleton]
    out.check(
        "apparent_zero.critical",
        critical == expected,
        "critical cells differ from the vertices and edges of the tree",
        simplex_list(X, extra or [s for s in expected if s not in critical]),
    )

    for level in range(1, len(X.levels)):
        K = full.restrict_to_level(level)
        forest = subforest(T, X.levels[level], X)
        L = full.restrict_to_level(level - 1).union(forest)
        step = DiscreteGradient.from_matching(matching.restrict(lambda s, _: F.level(s) == level), order)
        add_collapse_checks(out, f"collapse.{_level_name(X, level)}", K, step, L, betti, order)
        upto = DiscreteGradient.from_matching(matching.restrict(lambda s, _: F.level(s) <= level), order)
        add_collapse_checks(out, f"collapse_to_forest.{_level_name(X, level)}", K, upto, forest, betti, order)

    reverse = Filtration(full, order.reversed(), SimplexOrdering.REVERSE_COLEX)
    persistence = persistent_homology(reverse, max_degree=max(full.dimension - 1, 0), budget=options.budget)
    higher = {k: v for k, v in persistence.barcode.intervals.items() if k >= 1 and v}
    out.check(
        "persistence.higher_degrees_empty",
        not higher,
        f"degree {min(higher) if higher else ''} has intervals",
        {str(k): [[number(b), None if d is None else number(d)] for b, d in v] for k, v in higher.items()},
    )
    additions = persistence.stats.additions_from(1)
    out.check("persistence.no_additions", additions == 0, f"{additions} column additions in degrees >= 1")

    out.results.update(
        {
            "order": [X.names[v] for v in order.sequence],
            "apparent_pairs": len(matching),
            "critical_cells": len(critical),
            "levels": len(X.levels),
            "stats": persistence.stats.to_json(),
        }
    )
    return out


def _tree_gradient_pipeline(
    X: FiniteMetricSpace,
    tree: Optional[WeightedTree],
    options: PipelineOptions,
    name: str,
    build: Callable[[SimplicialComplex, Optional[VertexOrder]], DiscreteGradient],
    ordered: bool = False,
) -> PipelineOutcome:
    out = PipelineOutcome()
    T = _tree_of(X, tree)
    order = tree_order(T, options.order, options.root, options.allow_incompatible) if ordered else options.order
    full = full_complex(X, budget=options.budget)
    V = build(full, order)
    skeleton = tree_complex(X, T)
    add_gradient_checks(out, name, validate_gradient(full, V, skeleton, order), X)
    add_euler_check(out, name, V, full)
    critical = critical_cells(V, full)
    out.check(
        f"{name}.critical",
        set(critical) == set(skeleton.simplices),
        "critical cells differ from the vertices and edges of the tree",
        simplex_list(X, [s for s in critical if s not in skeleton]),
    )
    add_collapse_checks(out, f"{name}.collapse", full, V, skeleton, BettiCache(), order)
    out.results.update({"intervals": len(V), "gradient": V.dump(X).splitlines()})
    return out


def verify_canonical(X: FiniteMetricSpace, tree: Optional[WeightedTree], options: PipelineOptions) -> PipelineOutcome:
    return _tree_gradient_pipeline(X, tree, options, "canonical", lambda full, _: canonical_gradient(X, full))


def verify_perturbed(X: FiniteMetricSpace, tree: Optional[WeightedTree], options: PipelineOptions) -> PipelineOutcome:
    return _tree_gradient_pipeline(
        X, tree, options, "perturbed", lambda full, order: perturbed_gradient(X, order, full), ordered=True
    )


def verify_refinement(X: FiniteMetricSpace, tree: Optional[WeightedTree], options: PipelineOptions) -> PipelineOutcome:
    """Canonical refines perturbed, which is refined by the zero-persistence apparent pairs."""
    out = PipelineOutcome()
    T = _tree_of(X, tree)
    order = tree_order(T, options.order, options.root, options.allow_incompatible)
    full = full_complex(X, budget=options.budget)
    canonical = canonical_gradient(X, full)
    perturbed = perturbed_gradient(X, order, full)
    apparent = zero_persistence_apparent_pairs(Filtration(full, order))

    fine = refinement_check(perturbed, minimal_vertex_refinement(canonical, order))
    out.check("canonical_refines_perturbed", fine.holds, fine.detail, jsonable(X, fine.witness))
    finest = refinement_check(perturbed, apparent)
    out.check("apparent_refines_perturbed", finest.holds, finest.detail, jsonable(X, finest.witness))

    try:
        generic = generic_gradient(X)
    except GenericityError:
        generic = None
    if generic is not None:
        rng = np.random.default_rng(options.seed)
        for trial in range(GENERIC_ORDER_TRIALS):
            shuffled = VertexOrder(tuple(int(v) for v in rng.permutation(X.n)))
            pairs = zero_persistence_apparent_pairs(Filtration(full, shuffled))
            refined = minimal_vertex_refinement(generic, shuffled)
            mismatch = sorted(set(pairs.pairs) ^ set(refined.pairs))
            out.check(
                f"generic_equals_apparent.{trial}",
                not mismatch,
                f"order {[X.names[v] for v in shuffled.sequence]}: {len(mismatch)} pairs differ",
                jsonable(X, mismatch[:5]),
            )
    out.results.update(
        {
            "order": [X.names[v] for v in order.sequence],
            "canonical_intervals": len(canonical),
            "perturbed_intervals": len(perturbed),
            "apparent_pairs": len(apparent),
            "generic": generic is not None,
        }
    )
    return out


def verify_h1_surjectivity(X: FiniteMetricSpace, options: PipelineOptions) -> PipelineOutcome:
    """No degree-1 class is born after twice the geodesic defect."""
    out = PipelineOutcome()
    nu = geodesic_defect(X).nu
    F = Filtration(full_complex(X, dim_cap=2, budget=options.budget))
    barcode = persistent_homology(F, max_degree=1, budget=options.budget).barcode
    check = h1_surjectivity_check(X, nu, barcode)
    witness = None
    if check.witness is not None:
        birth, death = check.witness
        witness = [number(birth), None if death is None else number(death)]
    out.check("h1.births_below_bound", check.holds, f"a degree-1 class is born after 2*nu = {check.bound}", witness)
    out.results.update(
        {
            "nu": number(nu),
            "bound": number(check.bound),
            "barcode": barcode.to_json(),
        }
    )
    return out


def verify_apparent_collapse(X: FiniteMetricSpace, options: PipelineOptions) -> PipelineOutcome:
    """Whether zero-persistence apparent pairs alone collapse VR_u onto VR_t."""
    if options.u is None or options.t is None:
        raise InvalidParameterError("apparent-collapse needs both --u and --t")
    if X.mode.lt(options.u, options.t):
        raise InvalidParameterError(f"u = {options.u} lies below t = {options.t}")
    out = PipelineOutcome()
    order = options.order or VertexOrder.identity(X.n)
    full = full_complex(X, budget=options.budget)
    F = Filtration(full, order)
    upper, lower = X.level_index(options.u), X.level_index(options.t)
    matching = zero_persistence_apparent_pairs(F)
    window = matching.restrict(lambda s, _: lower < F.level(s) <= upper)
    V = DiscreteGradient.from_matching(window, order)
    K, L = full.restrict_to_level(upper), full.restrict_to_level(lower)

    uncovered: list[Simplex] = sorted(
        (s for s in K.simplices if s not in L and V.is_critical(s)), key=lambda s: (len(s), s)
    )
    covered = out.check(
        "apparent.covers",
        not uncovered,
        f"{len(uncovered)} simplices of diameter in ({format_value(options.t)}, {format_value(options.u)}] are critical",
        simplex_list(X, uncovered),
    )
    if covered:
        add_collapse_checks(out, "apparent.collapse", K, V, L, BettiCache(), order)

    everything = critical_cells(DiscreteGradient.from_matching(matching, order), full)
    out.results.update(
        {
            "u": number(options.u),
            "t": number(options.t),
            "pairs_in_window": len(window),
            "uncovered": [simplex_label(X, s) for s in uncovered],
            "critical_cells": [simplex_label(X, s) for s in everything],
        }
    )
    return out


def _is_generic(X: FiniteMetricSpace) -> bool:
    distances = [X.level(*e) for e in combinations(range(X.n), 2)]
    return len(distances) == len(set(distances))


def run_pipeline(
    name: str,
    X: FiniteMetricSpace,
    tree: Optional[WeightedTree],
    options: PipelineOptions,
) -> PipelineOutcome:
    """Dispatch a pipeline by name on an uncapped desk-scale space."""
    try:
        pipeline = Pipeline(name)
    except ValueError:
        choices = ", ".join(p.value for p in Pipeline)
        raise InvalidParameterError(f"unknown pipeline '{name}', expected one of {choices}") from None
    require_desk_scale(X, None)
    logger.info(f"Running pipeline {pipeline.value} on {X.n} points")
    if pipeline is Pipeline.THEOREM1:
        outcome = verify_theorem1(X, options)
    elif pipeline is Pipeline.THEOREM2:
        outcome = verify_theorem2(X, tree, options)
    elif pipeline is Pipeline.CANONICAL:
        outcome = verify_canonical(X, tree, options)
    elif pipeline is Pipeline.PERTURBED:
        outcome = verify_perturbed(X, tree, options)
    elif pipeline is Pipeline.REFINEMENT:
        outcome = verify_refinement(X, tree, options)
    elif pipeline is Pipeline.H1_SURJECTIVITY:
        outcome = verify_h1_surjectivity(X, options)
    else:
        outcome = verify_apparent_collapse(X, options)
    outcome.results.setdefault("generic_distances", _is_generic(X))
    return outcome

