"""Shared test configuration and fixtures for pytest."""

import sys
from pathlib import Path

# Add parent directory to Python path for imports
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

import numpy as np
import pytest

from complexes.rips import full_complex
from metric.generators import graph_metric, random_metric, random_tree
from metric.parsers import load_metric, load_tree
from metric.space import FiniteMetricSpace
from metric.trees import tree_metric
from metric.values import DistanceMode

# Star with center b and unit edges; distances 1 to the center, 2 otherwise
UNIT_STAR_TREE = "root b\na b 1\nb c 1\nb d 1\n"
UNIT_STAR_MATRIX = "1\n2,1\n2,1,2\n"

# Tree with pairwise distinct distances 1..6
GENERIC_TREE = "a b 1\nb c 2\nb d 4\n"

# Graph whose Rips filtration is not collapsed by apparent pairs at scale 15
COUNTEREXAMPLE_EDGES = [("a", "b", 1), ("a", "c", 1), ("b", "d", 5), ("c", "d", 5), ("d", "e", 10)]


@pytest.fixture(scope="session")
def star_tree():
    """Unit star as a rooted tree, vertices a=0, b=1, c=2, d=3."""
    return load_tree(UNIT_STAR_TREE)


@pytest.fixture(scope="session")
def star(star_tree):
    return tree_metric(star_tree)


@pytest.fixture(scope="session")
def star_full(star):
    return full_complex(star)


@pytest.fixture(scope="session")
def generic_tree():
    return load_tree(GENERIC_TREE)


@pytest.fixture(scope="session")
def generic(generic_tree):
    return tree_metric(generic_tree)


@pytest.fixture(scope="session")
def counterexample():
    """Five points a..e; delta = 1, nu = 5, so the collapse threshold is 14."""
    return graph_metric(["a", "b", "c", "d", "e"], COUNTEREXAMPLE_EDGES)


@pytest.fixture(scope="session")
def triangle():
    """Three points at mutual distance 1."""
    return load_metric("1\n1,1\n")


@pytest.fixture(scope="session")
def two_points():
    return load_metric("1\n")


@pytest.fixture
def rng():
    """Fresh seeded generator per test."""
    return np.random.default_rng(20240611)


def seeded_trees(count: int, n_max: int, seed: int = 7, n_min: int = 2):
    """Deterministic random trees with n_min..n_max vertices."""
    generator = np.random.default_rng(seed)
    trees = []
    for _ in range(count):
        n = int(generator.integers(n_min, n_max + 1))
        trees.append(random_tree(n, generator))
    return trees


def seeded_metrics(count: int, n_max: int, seed: int = 11, n_min: int = 2):
    """Deterministic random metrics with n_min..n_max points."""
    generator = np.random.default_rng(seed)
    return [random_metric(int(generator.integers(n_min, n_max + 1)), generator) for _ in range(count)]


def decimal_metrics(count: int, n_max: int, seed: int = 13):
    """Deterministic decimal-mode metrics with 2..n_max points.

    Even draws are plane samples, odd draws have off-diagonal entries in
    [5, 10], which always satisfy the triangle inequality.
    """
    generator = np.random.default_rng(seed)
    spaces = []
    for i in range(count):
        n = int(generator.integers(2, n_max + 1))
        if i % 2 == 0:
            points = generator.uniform(0, 10, size=(n, 2))
            rows = np.linalg.norm(points[:, None, :] - points[None, :, :], axis=-1)
        else:
            upper = np.triu(np.round(generator.uniform(5, 10, size=(n, n)), 3), 1)
            rows = upper + upper.T
        spaces.append(FiniteMetricSpace.from_matrix(rows.tolist(), mode=DistanceMode.decimal()))
    return spaces


def write_input(tmp_path: Path, text: str, name: str = "input.txt") -> str:
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)
