"""Command-line front end: parse flags, run one command, write its report.

Exit codes: 0 success, 1 failed assertion, 2 input or precondition error,
3 budget exceeded.
"""

import argparse
from fractions import Fraction
import sys
import time
from typing import Any, Callable, Optional, Sequence

import numpy as np

from cli.datasets import DatasetKind, generate
from cli.io import (
    INPUT_FORMATS,
    LoadedInput,
    load_input,
    number,
    require_desk_scale,
    simplex_label,
    write_report,
)
from cli.models import (
    AssertionResult,
    BarcodePayload,
    ErrorInfo,
    ExitCode,
    ReductionStatsPayload,
    RunReport,
    exit_code_for,
    to_error_code,
)
from cli.pipelines import (
    Pipeline,
    PipelineOptions,
    add_gradient_checks,
    PipelineOutcome,
    run_pipeline,
    tree_order,
)
from complexes.filtration import Filtration, SimplexOrdering
from complexes.rips import SimplicialComplex, full_complex, subforest, vietoris_rips
from complexes.simplex import VertexOrder
from config import DECIMAL_EPS, DEFAULT_DIM_CAP, DEFAULT_NUMERIC_MODE, DEFAULT_SEED, FULL_COMPLEX_MAX_POINTS
from errors import InvalidParameterError, PreconditionError, RipsCollapseError, ThresholdError
from gradients.apparent import apparent_pairs, zero_persistence_apparent_pairs
from gradients.cone import cone_gradient, filtered_cone_gradient
from gradients.tree import (
    canonical_gradient,
    generic_gradient,
    perturbed_gradient,
    require_tree_metric,
    tree_complex,
)
from logging_config import get_logger, set_log_level
from metric.invariants import collapse_threshold, geodesic_defect, hyperbolicity
from metric.space import FiniteMetricSpace
from metric.trees import WeightedTree, compatible_order, is_compatible
from metric.values import Distance, DistanceMode, format_value
from morse.collapse import collapse, replay_certificate
from morse.gradient import DiscreteGradient
from morse.validation import critical_cells, validate_gradient
from persistence.reduction import persistent_homology

logger = get_logger(__name__)

GRADIENT_KINDS = ("cone", "filtered-cone", "generic", "canonical", "perturbed", "apparent", "apparent-zero")
COLLAPSE_KINDS = ("cone", "filtered-cone", "generic", "canonical", "perturbed", "apparent-zero")
TREE_KINDS = ("generic", "canonical", "perturbed")
ORDER_CHOICES = "identity, compatible, reverse-compatible, random, or comma-separated point names"


# === Shared helpers ===


def _mode(args: argparse.Namespace) -> DistanceMode:
    try:
        return DistanceMode.from_name(args.mode, args.eps)
    except ValueError as exc:
        raise InvalidParameterError(str(exc)) from None


def _load(args: argparse.Namespace) -> LoadedInput:
    return load_input(args.input, args.format, _mode(args), allow_pseudo=args.allow_pseudo)


def _value(X: FiniteMetricSpace, raw: Optional[str], flag: str) -> Optional[Distance]:
    if raw is None:
        return None
    try:
        value = X.mode.parse(raw)
    except (ValueError, ZeroDivisionError):
        raise InvalidParameterError(f"{flag} expects a number, got '{raw}'") from None
    if X.mode.lt(value, X.mode.zero):
        raise InvalidParameterError(f"{flag} must be nonnegative, got {raw}")
    return value


def _point_index(X: FiniteMetricSpace, name: Optional[str], flag: str) -> Optional[int]:
    if name is None:
        return None
    try:
        return X.index_of(name)
    except KeyError:
        raise InvalidParameterError(f"{flag}: unknown point '{name}'") from None


def _tree(loaded: LoadedInput) -> WeightedTree:
    recovered = require_tree_metric(loaded.space)
    return loaded.tree if loaded.tree is not None else recovered


def resolve_order(
    choice: Optional[str],
    loaded: LoadedInput,
    root: Optional[int] = None,
    seed: int = DEFAULT_SEED,
) -> tuple[Optional[VertexOrder], SimplexOrdering]:
    """Vertex order and simplex tie-break named by an --order flag."""
    X = loaded.space
    if choice is None:
        return None, SimplexOrdering.LEX
    if choice == "identity":
        return VertexOrder.identity(X.n), SimplexOrdering.LEX
    if choice == "compatible":
        return compatible_order(_tree(loaded), root), SimplexOrdering.LEX
    if choice == "reverse-compatible":
        return compatible_order(_tree(loaded), root).reversed(), SimplexOrdering.REVERSE_COLEX
    if choice == "random":
        rng = np.random.default_rng(seed)
        return VertexOrder(tuple(int(v) for v in rng.permutation(X.n))), SimplexOrdering.LEX
    names = [name.strip() for name in choice.split(",") if name.strip()]
    indices = [_point_index(X, name, "--order") for name in names]
    if sorted(i for i in indices if i is not None) != list(range(X.n)):
        raise InvalidParameterError(f"--order must be {ORDER_CHOICES}; '{choice}' does not list every point once")
    return VertexOrder(tuple(i for i in indices if i is not None)), SimplexOrdering.LEX


def _checked_order(
    args: argparse.Namespace, loaded: LoadedInput, tree: WeightedTree, root: Optional[int]
) -> VertexOrder:
    """--order for tree constructions: compatible by default, else verified unless --allow-incompatible."""
    order, _ = resolve_order(args.order, loaded, root, args.seed)
    return tree_order(tree, order, root, args.allow_incompatible)


def _labels(X: FiniteMetricSpace, simplices: Sequence[tuple[int, ...]]) -> list[str]:
    return [simplex_label(X, s) for s in simplices]


def _attach(report: RunReport, outcome: PipelineOutcome) -> None:
    report.results.update(outcome.results)
    for assertion in outcome.assertions:
        report.add(assertion)


# === Commands ===


def cmd_analyze(args: argparse.Namespace, report: RunReport) -> None:
    loaded = _load(args)
    report.input_digest = loaded.digest
    X = loaded.space
    hyp = hyperbolicity(X)
    defect = geodesic_defect(X)
    threshold = collapse_threshold(hyp.delta, defect.nu)
    try:
        require_tree_metric(X)
        is_tree = True
    except PreconditionError:
        is_tree = False
    results: dict[str, Any] = {
        "points": X.n,
        "names": list(X.names),
        "mode": X.mode.kind.value,
        "delta": number(hyp.delta),
        "nu": number(defect.nu),
        "threshold": number(threshold),
        "levels": [number(v) for v in X.levels],
        "delta_witness": None if hyp.witness is None else [X.names[v] for v in hyp.witness],
        "nu_witness": None,
        "tree_metric": is_tree,
        "merged_points": [list(group) for group in X.merged],
    }
    if defect.witness is not None:
        x, y, r = defect.witness
        results["nu_witness"] = {"x": X.names[x], "y": X.names[y], "r": number(r)}
    report.results.update(results)
    print(f"points     {X.n}")
    print(f"delta      {format_value(hyp.delta)}")
    print(f"nu         {format_value(defect.nu)}")
    print(f"4d+2nu     {format_value(threshold)}")
    print(f"levels     {' '.join(format_value(v) for v in X.levels)}")


def cmd_vr(args: argparse.Namespace, report: RunReport) -> None:
    loaded = _load(args)
    report.input_digest = loaded.digest
    X = loaded.space
    require_desk_scale(X, args.dim_cap)
    t = _value(X, args.t, "--t")
    K = vietoris_rips(X, X.max_distance if t is None else t, args.dim_cap, args.budget)
    counts = [len(K.by_dimension(k)) for k in range(K.dimension + 1)]
    report.results.update(
        {
            "t": number(X.max_distance if t is None else t),
            "simplices": len(K),
            "by_dimension": counts,
            "euler_characteristic": K.euler_characteristic(),
        }
    )
    sys.stdout.write(Filtration(K).dump())


def _gradient_setup(
    kind: str,
    args: argparse.Namespace,
    loaded: LoadedInput,
) -> tuple[DiscreteGradient, SimplicialComplex, Optional[SimplicialComplex], Optional[VertexOrder]]:
    """Gradient of `kind`, the complex it lives on, and the subcomplex it should leave critical."""
    X = loaded.space
    p = _point_index(X, args.base_point, "--base-point") or 0
    root = _point_index(X, args.root, "--root")
    apparent = kind in ("apparent", "apparent-zero")
    if args.dim_cap is not None and not apparent:
        raise InvalidParameterError(f"--dim-cap applies to apparent kinds only, not '{kind}'")
    require_desk_scale(X, args.dim_cap)
    full = full_complex(X, args.dim_cap, args.budget)
    point = SimplicialComplex(X, [(p,)])

    if kind == "cone":
        t = _value(X, args.t, "--t")
        if t is None:
            raise InvalidParameterError("kind 'cone' needs --t")
        result = cone_gradient(X, t, p)
        return result.gradient, full.restrict_to_level(result.level), point, None
    if kind == "filtered-cone":
        return filtered_cone_gradient(X, p, full).gradient, full, point, None
    if kind in TREE_KINDS:
        tree = _tree(loaded)
        skeleton = tree_complex(X, tree)
        if kind == "generic":
            return generic_gradient(X), full, skeleton, None
        if kind == "canonical":
            return canonical_gradient(X, full), full, skeleton, None
        order = _checked_order(args, loaded, tree, root)
        return perturbed_gradient(X, order, full), full, skeleton, order
    order, ordering = resolve_order(args.order, loaded, root, args.seed)
    F = Filtration(full, order, ordering)
    matching = apparent_pairs(F) if kind == "apparent" else zero_persistence_apparent_pairs(F)
    return DiscreteGradient.from_matching(matching, F.order), full, None, F.order


def cmd_gradient(args: argparse.Namespace, report: RunReport) -> None:
    loaded = _load(args)
    report.input_digest = loaded.digest
    X = loaded.space
    V, K, L, order = _gradient_setup(args.kind, args, loaded)
    validation = validate_gradient(K, V, L, order, check_diameter=args.kind not in ("cone", "filtered-cone", "apparent"))
    outcome = PipelineOutcome()
    add_gradient_checks(outcome, args.kind.replace("-", "_"), validation, X)
    critical = critical_cells(V, K)
    outcome.results.update(
        {
            "kind": args.kind,
            "intervals": V.dump(X).splitlines(),
            "critical_cells": _labels(X, critical),
            "validation": validation.summary(),
        }
    )
    _attach(report, outcome)
    sys.stdout.write(V.dump(X))
    logger.info(f"{args.kind} gradient: {len(V)} intervals, {len(critical)} critical cells ({validation.summary()})")


def cmd_collapse(args: argparse.Namespace, report: RunReport) -> None:
    loaded = _load(args)
    report.input_digest = loaded.digest
    X = loaded.space
    require_desk_scale(X, None)
    kind = args.kind
    u = _value(X, args.source, "--from")
    t = _value(X, args.target, "--to")
    assert u is not None
    if t is not None and X.mode.lt(u, t):
        raise InvalidParameterError(f"--to {args.target} lies above --from {args.source}")
    p = _point_index(X, args.base_point, "--base-point") or 0
    root = _point_index(X, args.root, "--root")
    full = full_complex(X, budget=args.budget)
    upper = X.level_index(u)
    lower = -1 if t is None else X.level_index(t)
    K = full.restrict_to_level(upper)
    point = SimplicialComplex(X, [(p,)])
    order: Optional[VertexOrder] = None

    if kind == "cone":
        if t is not None:
            raise InvalidParameterError("kind 'cone' collapses onto the base point; drop --to")
        V, L = cone_gradient(X, u, p).gradient, point
    elif kind == "filtered-cone":
        result = filtered_cone_gradient(X, p, full)
        floor = lower if t is not None else upper
        if floor < result.base_level:
            raise ThresholdError(
                f"collapse scale lies below 4*delta + 2*nu = {result.threshold}", threshold=result.threshold
            )
        if t is None:
            V, L = result.up_to(upper), point
        else:
            V, L = result.between(lower, upper), full.restrict_to_level(lower)
    else:
        tree = _tree(loaded)
        if kind == "apparent-zero":
            order = _checked_order(args, loaded, tree, root)
            F = Filtration(full, order)
            matching = zero_persistence_apparent_pairs(F).restrict(lambda s, _: lower < F.level(s) <= upper)
            V = DiscreteGradient.from_matching(matching, order)
        else:
            if kind == "generic":
                gradient = generic_gradient(X)
            elif kind == "canonical":
                gradient = canonical_gradient(X, full)
            else:
                order = _checked_order(args, loaded, tree, root)
                gradient = perturbed_gradient(X, order, full)
            V = gradient.restrict(lambda i: lower < X.diameter_level(i.rho) <= upper)
        forest = subforest(tree, u, X)
        L = forest if t is None else full.restrict_to_level(lower).union(forest)

    certificate = collapse(K, V, L, order)
    replay_certificate(K, certificate)
    report.add(AssertionResult(name="certificate.replay", passed=True))
    report.results.update(
        {
            "kind": kind,
            "from": number(u),
            "to": None if t is None else number(t),
            "steps": len(certificate),
            "start_id": certificate.start_id,
            "end_id": certificate.end_id,
            "start_simplices": len(K),
            "end_simplices": len(L),
        }
    )
    sys.stdout.write(certificate.dump(X))


def cmd_persistence(args: argparse.Namespace, report: RunReport) -> None:
    loaded = _load(args)
    report.input_digest = loaded.digest
    X = loaded.space
    cap = args.dim_cap
    if cap is None and X.n > FULL_COMPLEX_MAX_POINTS:
        cap = max(DEFAULT_DIM_CAP, args.max_degree + 1)
        logger.info(f"{X.n} points exceed the full-complex limit; capping at dimension {cap}")
    require_desk_scale(X, cap)
    root = _point_index(X, args.root, "--root")
    order, ordering = resolve_order(args.order, loaded, root, args.seed)
    F = Filtration(full_complex(X, cap, args.budget), order, ordering)
    result = persistent_homology(F, args.max_degree, use_shortcut=not args.no_shortcut, budget=args.budget)
    zero_length = sum(len(v) for v in result.barcode.zero_length.values())
    report.results.update(
        {
            "order": [X.names[v] for v in F.order.sequence],
            "ordering": F.ordering.value,
            "dim_cap": cap,
            "barcode": BarcodePayload(intervals=result.barcode.to_json(), zero_length=zero_length).model_dump(),
            "stats": ReductionStatsPayload(**result.stats.to_json()).model_dump(),
        }
    )
    sys.stdout.write(result.barcode.table())


def cmd_verify(args: argparse.Namespace, report: RunReport) -> None:
    loaded = _load(args)
    report.input_digest = loaded.digest
    report.command = f"verify {args.pipeline}"
    X = loaded.space
    root = _point_index(X, args.root, "--root")
    order, _ = resolve_order(args.order, loaded, root, args.seed)
    options = PipelineOptions(
        t=_value(X, args.t, "--t"),
        u=_value(X, args.u, "--u"),
        base_point=_point_index(X, args.base_point, "--base-point") or 0,
        order=order,
        root=root,
        seed=args.seed,
        budget=args.budget,
        allow_incompatible=args.allow_incompatible,
    )
    outcome = run_pipeline(args.pipeline, X, loaded.tree, options)
    _attach(report, outcome)
    failed = [a for a in outcome.assertions if not a.passed]
    print(f"{args.pipeline}: {len(outcome.assertions) - len(failed)}/{len(outcome.assertions)} checks passed")
    for assertion in failed:
        print(f"FAIL {assertion.name}: {assertion.detail} {assertion.witness if assertion.witness is not None else ''}")


def cmd_gen(args: argparse.Namespace, report: RunReport) -> None:
    try:
        step = Fraction(args.step)
    except (ValueError, ZeroDivisionError):
        raise InvalidParameterError(f"--step expects a number, got '{args.step}'") from None
    dataset = generate(args.kind, args.n, args.seed, args.low, args.high, step)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(dataset.text)
        logger.info(f"Wrote {args.kind} dataset to {args.out}")
    else:
        sys.stdout.write(dataset.text)
    report.results.update({**dataset.description, "format": dataset.fmt})


def cmd_order(args: argparse.Namespace, report: RunReport) -> None:
    loaded = _load(args)
    report.input_digest = loaded.digest
    X = loaded.space
    tree = _tree(loaded)
    root = _point_index(X, args.root, "--root")
    if args.check:
        candidate, _ = resolve_order(args.check, loaded)
        assert candidate is not None
        ok, witness = is_compatible(tree, candidate, root)
        detail = "" if witness is None else f"'{X.names[witness[1]]}' precedes its parent '{X.names[witness[0]]}'"
        report.add(
            AssertionResult(
                name="order.compatible",
                passed=ok,
                detail=detail,
                witness=None if witness is None else [X.names[witness[0]], X.names[witness[1]]],
            )
        )
        order = candidate
    else:
        order = compatible_order(tree, root)
        if args.reverse:
            order = order.reversed()
    names = [X.names[v] for v in order.sequence]
    report.results.update({"order": names, "reversed": bool(args.reverse)})
    print(" ".join(names))


# === Parser ===


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=INPUT_FORMATS, default="lower", help="input format (default: lower)")
    common.add_argument(
        "--mode",
        choices=("rational", "decimal"),
        default=DEFAULT_NUMERIC_MODE,
        help=f"numeric mode (default: {DEFAULT_NUMERIC_MODE})",
    )
    common.add_argument("--eps", type=float, default=DECIMAL_EPS, help=f"decimal tolerance (default: {DECIMAL_EPS})")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"random seed (default: {DEFAULT_SEED})")
    common.add_argument("--json", metavar="PATH", help="write the JSON report to PATH ('-' for stdout)")
    common.add_argument("--dim-cap", type=int, default=None, help="largest simplex dimension to build")
    common.add_argument("--budget", type=int, default=None, help="simplex/column budget override")
    common.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
    common.add_argument("--allow-pseudo", action="store_true", help="merge points at distance zero")
    return common


def _order_flags(parser: argparse.ArgumentParser, tree_checked: bool = True) -> None:
    parser.add_argument("--order", default=None, help=f"vertex order: {ORDER_CHOICES}")
    parser.add_argument("--root", default=None, help="root point for compatible orders")
    if tree_checked:
        parser.add_argument(
            "--allow-incompatible",
            action="store_true",
            help="accept an --order that does not extend the rooted tree order",
        )


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = argparse.ArgumentParser(
        prog="rips-collapse",
        description="Collapses of Vietoris-Rips complexes: gradients, certificates and persistence",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    analyze = commands.add_parser("analyze", parents=[common], help="hyperbolicity, geodesic defect, levels")
    analyze.add_argument("input", help="input file ('-' for stdin)")
    analyze.set_defaults(handler=cmd_analyze)

    vr = commands.add_parser("vr", parents=[common], help="dump the Vietoris-Rips complex at scale t")
    vr.add_argument("input")
    vr.add_argument("--t", default=None, help="scale (default: the largest distance)")
    vr.set_defaults(handler=cmd_vr)

    gradient = commands.add_parser("gradient", parents=[common], help="build and validate a gradient")
    gradient.add_argument("input")
    gradient.add_argument("--kind", choices=GRADIENT_KINDS, required=True)
    gradient.add_argument("--t", default=None, help="scale of the cone gradient")
    gradient.add_argument("--base-point", default=None, help="base point of cone gradients")
    _order_flags(gradient)
    gradient.set_defaults(handler=cmd_gradient)

    collapse_cmd = commands.add_parser("collapse", parents=[common], help="certificate for VR_u onto VR_t")
    collapse_cmd.add_argument("input")
    collapse_cmd.add_argument("--kind", choices=COLLAPSE_KINDS, required=True)
    collapse_cmd.add_argument("--from", dest="source", required=True, help="upper scale u")
    collapse_cmd.add_argument("--to", dest="target", default=None, help="lower scale t (default: point or subforest)")
    collapse_cmd.add_argument("--base-point", default=None)
    _order_flags(collapse_cmd)
    collapse_cmd.set_defaults(handler=cmd_collapse)

    persistence = commands.add_parser("persistence", parents=[common], help="barcode and reduction statistics")
    persistence.add_argument("input")
    persistence.add_argument("--max-degree", type=int, default=1)
    persistence.add_argument("--no-shortcut", action="store_true", help="reduce apparent pairs as well")
    _order_flags(persistence, tree_checked=False)
    persistence.set_defaults(handler=cmd_persistence)

    verify = commands.add_parser("verify", parents=[common], help="run a verification pipeline")
    verify.add_argument("input")
    verify.add_argument("pipeline", choices=[p.value for p in Pipeline])
    verify.add_argument("--t", default=None)
    verify.add_argument("--u", default=None)
    verify.add_argument("--base-point", default=None)
    _order_flags(verify)
    verify.set_defaults(handler=cmd_verify)

    gen = commands.add_parser("gen", parents=[common], help="write a seeded dataset")
    gen.add_argument("kind", choices=[k.value for k in DatasetKind])
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--low", type=int, default=None)
    gen.add_argument("--high", type=int, default=None)
    gen.add_argument("--step", default="1/2", help="edge step of grid samples (default: 1/2)")
    gen.add_argument("--out", default=None, help="output file (default: stdout)")
    gen.set_defaults(handler=cmd_gen)

    order = commands.add_parser("order", parents=[common], help="compatible vertex order of a tree")
    order.add_argument("input")
    order.add_argument("--root", default=None)
    order.add_argument("--reverse", action="store_true")
    order.add_argument("--check", default=None, help="comma-separated order to test for compatibility")
    order.set_defaults(handler=cmd_order)

    return parser


def _parameters(args: argparse.Namespace) -> dict[str, Any]:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("handler", "command", "json", "log_level")}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command and return its exit code."""
    args = build_parser().parse_args(argv)
    if args.log_level:
        set_log_level(args.log_level)
    handler: Callable[[argparse.Namespace, RunReport], None] = args.handler
    report = RunReport(command=args.command, parameters=_parameters(args))
    logger.info(f"Starting {args.command}")
    start = time.perf_counter()
    try:
        handler(args, report)
        exit_code = ExitCode.OK if report.passed else ExitCode.ASSERTION_FAILED
    except (RipsCollapseError, OSError, ValueError) as exc:
        code = to_error_code(exc)
        exit_code = exit_code_for(code)
        context = getattr(exc, "context", None)
        report.error = ErrorInfo(
            error_code=code.value,
            detail=getattr(exc, "message", str(exc)),
            exit_code=int(exit_code),
            context={k: _plain(v) for k, v in context.items()} if context else None,
        )
        report.passed = False
        logger.error(f"{args.command} failed [{code.value}]: {report.error.detail}")
    report.wall_time = time.perf_counter() - start
    logger.info(f"Finished {report.command} in {report.wall_time:.3f}s (exit {int(exit_code)})")
    write_report(report, args.json)
    return int(exit_code)


def _plain(value: Any) -> Any:
    if isinstance(value, Fraction):
        return number(value)
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value
