"""Seeded dataset files for the `gen` command."""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Optional

import numpy as np

from config import DEFAULT_WEIGHT_HIGH, DEFAULT_WEIGHT_LOW, METRIC_WEIGHT_HIGH, METRIC_WEIGHT_LOW
from errors import InvalidParameterError
from logging_config import get_logger
from metric.generators import cycle_graph_metric, random_metric, random_tree, subdivide_tree
from metric.space import FiniteMetricSpace
from metric.trees import WeightedTree
from metric.values import format_value

logger = get_logger(__name__)


class DatasetKind(str, Enum):
    RANDOM_TREE = "random-tree"
    RANDOM_METRIC = "random-metric"
    GRID_SAMPLE = "grid-sample-of-tree"
    CYCLE_GRAPH = "cycle-graph"


@dataclass
class Dataset:
    text: str
    fmt: str  # input format to read it back with
    description: dict[str, Any] = field(default_factory=dict)


def tree_to_text(T: WeightedTree) -> str:
    lines = []
    if T.root is not None:
        lines.append(f"root {T.names[T.root]}")
    lines.extend(f"{T.names[e.u]} {T.names[e.v]} {format_value(e.length)}" for e in T.edges)
    return "\n".join(lines) + "\n"


def metric_to_text(X: FiniteMetricSpace) -> str:
    """Lower-triangular rows; the first point has an empty row and is omitted."""
    rows = [",".join(format_value(X.d(i, j)) for j in range(i)) for i in range(1, X.n)]
    return "\n".join(rows) + ("\n" if rows else "")


def _weights(low: Optional[int], high: Optional[int], default_low: int, default_high: int) -> tuple[int, int]:
    return (default_low if low is None else low, default_high if high is None else high)


def generate(
    kind: str,
    n: int,
    seed: int,
    low: Optional[int] = None,
    high: Optional[int] = None,
    step: Fraction = Fraction(1, 2),
) -> Dataset:
    """Deterministic dataset for (kind, n, seed) and the weight range."""
    try:
        dataset_kind = DatasetKind(kind)
    except ValueError:
        raise InvalidParameterError(f"unknown dataset kind '{kind}'") from None
    rng = np.random.default_rng(seed)
    if dataset_kind is DatasetKind.RANDOM_TREE:
        low, high = _weights(low, high, DEFAULT_WEIGHT_LOW, DEFAULT_WEIGHT_HIGH)
        tree = random_tree(n, rng, low, high)
        description: dict[str, Any] = {"distribution": f"uniform labelled tree, integer weights in [{low}, {high}]"}
        dataset = Dataset(tree_to_text(tree), "tree", description)
    elif dataset_kind is DatasetKind.RANDOM_METRIC:
        low, high = _weights(low, high, METRIC_WEIGHT_LOW, METRIC_WEIGHT_HIGH)
        space = random_metric(n, rng, low, high)
        description = {"distribution": f"integer distances in [{low}, {high}], rejection-sampled"}
        dataset = Dataset(metric_to_text(space), "lower", description)
    elif dataset_kind is DatasetKind.GRID_SAMPLE:
        low, high = _weights(low, high, DEFAULT_WEIGHT_LOW, DEFAULT_WEIGHT_HIGH)
        tree = subdivide_tree(random_tree(n, rng, low, high), step)
        description = {
            "distribution": f"uniform labelled tree, integer weights in [{low}, {high}], edges split at step {step}",
            "points": tree.n,
        }
        dataset = Dataset(tree_to_text(tree), "tree", description)
    else:
        space = cycle_graph_metric(n)
        dataset = Dataset(metric_to_text(space), "lower", {"distribution": f"unit cycle graph on {n} vertices"})
    dataset.description.update({"kind": dataset_kind.value, "n": n, "seed": seed})
    logger.debug(f"Generated {dataset_kind.value} dataset with n={n}, seed={seed}")
    return dataset
