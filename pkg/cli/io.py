"""Reading inputs, writing reports, and labelling simplices for output."""

from dataclasses import dataclass
import hashlib
from pathlib import Path
import sys
from typing import Any, Iterable, Optional

from complexes.simplex import Simplex
from config import CAPPED_COMPLEX_MAX_POINTS, FULL_COMPLEX_MAX_POINTS
from errors import BudgetExceededError, InvalidParameterError
from logging_config import get_logger
from metric.parsers import load_metric, load_tree
from metric.space import FiniteMetricSpace
from metric.trees import WeightedTree, tree_metric
from metric.values import Distance, DistanceMode, to_json_number
from cli.models import RunReport

logger = get_logger(__name__)

INPUT_FORMATS = ("lower", "square", "tree")


@dataclass(frozen=True)
class LoadedInput:
    space: FiniteMetricSpace
    tree: Optional[WeightedTree]
    digest: str
    source: str


def input_digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def read_input_bytes(path: str) -> bytes:
    """Bytes of `path`, or of stdin when the path is '-'."""
    if path == "-":
        return sys.stdin.buffer.read()
    return Path(path).read_bytes()


def load_input(
    path: str,
    fmt: str = "lower",
    mode: Optional[DistanceMode] = None,
    allow_pseudo: bool = False,
) -> LoadedInput:
    """Parse a distance matrix or tree file into a metric space."""
    if fmt not in INPUT_FORMATS:
        raise InvalidParameterError(f"unknown input format '{fmt}', expected one of {', '.join(INPUT_FORMATS)}")
    data = read_input_bytes(path)
    digest = input_digest(data)
    mode = mode or DistanceMode.rational()
    if fmt == "tree":
        tree = load_tree(data, mode)
        space = tree_metric(tree)
        logger.info(f"Loaded tree with {tree.n} vertices from {path}")
        return LoadedInput(space, tree, digest, path)
    space = load_metric(data, fmt, mode, allow_pseudo=allow_pseudo)
    if space.merged:
        logger.warning(f"Merged {len(space.merged)} group(s) of coincident points")
    logger.info(f"Loaded {space.n}-point metric from {path}")
    return LoadedInput(space, None, digest, path)


def require_desk_scale(X: FiniteMetricSpace, dim_cap: Optional[int]) -> None:
    """Refuse spaces too large for the requested complex.

    Raises:
        BudgetExceededError: Above the full-complex limit without a cap, or above the capped limit
    """
    limit = FULL_COMPLEX_MAX_POINTS if dim_cap is None else CAPPED_COMPLEX_MAX_POINTS
    if X.n > limit:
        kind = "uncapped complexes" if dim_cap is None else f"complexes capped at dimension {dim_cap}"
        raise BudgetExceededError(f"{X.n} points exceed the limit of {limit} for {kind}", limit=limit, requested=X.n)


def simplex_names(X: FiniteMetricSpace, sigma: Simplex) -> list[str]:
    return [X.names[v] for v in sigma]


def simplex_label(X: FiniteMetricSpace, sigma: Simplex) -> str:
    """Set notation, e.g. {b,d,e}."""
    return "{" + ",".join(simplex_names(X, sigma)) + "}"


def simplex_list(X: FiniteMetricSpace, simplices: Iterable[Simplex]) -> list[list[str]]:
    return [simplex_names(X, s) for s in simplices]


def number(value: Distance) -> Any:
    return to_json_number(value)


def write_report(report: RunReport, json_path: Optional[str]) -> None:
    """Write the report as JSON to `json_path` ('-' for stdout); no-op without a path."""
    if not json_path:
        return
    payload = report.model_dump_json(indent=2)
    if json_path == "-":
        sys.stdout.write(payload + "\n")
        return
    path = Path(json_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(payload + "\n", encoding="utf-8")
    logger.debug(f"Report written to {path}")
