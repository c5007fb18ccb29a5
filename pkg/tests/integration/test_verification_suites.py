"""Integration tests running the verification pipelines over seeded families of spaces."""

from fractions import Fraction

import numpy as np
import pytest

from cli.pipelines import PipelineOptions, run_pipeline
from complexes.filtration import Filtration, SimplexOrdering
from complexes.rips import full_complex
from conftest import seeded_metrics, seeded_trees
from gradients.tree import canonical_gradient, perturbed_gradient, tree_complex
from metric.generators import cycle_graph_metric, random_tree, subdivide_tree
from metric.invariants import collapse_threshold, geodesic_defect, hyperbolicity, is_nu_geodesic
from metric.trees import compatible_order, tree_metric
from morse.collapse import collapse, replay_certificate
from persistence.oracle import homology_oracle
from persistence.reduction import persistent_homology

pytestmark = pytest.mark.integration

# Weighted trees with 4..9 vertices and random metrics with 4..7 points
SUITE_TREES = seeded_trees(50, 9, seed=231, n_min=4)
SUITE_METRICS = seeded_metrics(20, 7, seed=201, n_min=4)


def _failed(outcome):
    return [(a.name, a.detail) for a in outcome.assertions if not a.passed]


def _tree_id(tree):
    return f"n{tree.n}"


def _grid_samples(count, seed):
    generator = np.random.default_rng(seed)
    samples = []
    for _ in range(count):
        tree = random_tree(int(generator.integers(2, 4)), generator, 1, 3)
        samples.append(subdivide_tree(tree, Fraction(1)))
    return samples


# === Collapse Above The Threshold ===


@pytest.mark.parametrize("X", SUITE_METRICS, ids=lambda X: f"n{X.n}")
def test_filtered_cone_suite_on_random_metrics(X):
    outcome = run_pipeline("theorem1", X, None, PipelineOptions())
    assert not _failed(outcome), _failed(outcome)
    assert outcome.results["threshold"] == collapse_threshold(hyperbolicity(X).delta, geodesic_defect(X).nu)


@pytest.mark.parametrize("X", seeded_metrics(4, 6, seed=211), ids=lambda X: f"n{X.n}")
def test_cone_collapses_at_threshold(X):
    threshold = collapse_threshold(hyperbolicity(X).delta, geodesic_defect(X).nu)
    outcome = run_pipeline("theorem1", X, None, PipelineOptions(t=threshold))
    assert not _failed(outcome), _failed(outcome)
    assert any(a.name.startswith("cone.") for a in outcome.assertions)


@pytest.mark.parametrize("tree", SUITE_TREES, ids=_tree_id)
def test_filtered_cone_suite_on_trees(tree):
    X = tree_metric(tree)
    outcome = run_pipeline("theorem1", X, tree, PipelineOptions())
    assert not _failed(outcome), _failed(outcome)
    assert outcome.results["delta"] == 0


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_filtered_cone_suite_on_cycles(n):
    outcome = run_pipeline("theorem1", cycle_graph_metric(n), None, PipelineOptions())
    assert not _failed(outcome), _failed(outcome)


# === Tree Metrics ===


@pytest.mark.parametrize("tree", SUITE_TREES, ids=_tree_id)
def test_apparent_pair_suite_on_trees(tree):
    X = tree_metric(tree)
    outcome = run_pipeline("theorem2", X, tree, PipelineOptions())
    assert not _failed(outcome), _failed(outcome)
    assert outcome.results["critical_cells"] == 2 * X.n - 1


@pytest.mark.slow
@pytest.mark.parametrize("tree", _grid_samples(4, seed=241), ids=_tree_id)
def test_apparent_pair_suite_on_grid_samples(tree):
    X = tree_metric(tree)
    outcome = run_pipeline("theorem2", X, tree, PipelineOptions())
    assert not _failed(outcome), _failed(outcome)


@pytest.mark.parametrize("tree", SUITE_TREES, ids=_tree_id)
def test_refinement_chain_on_trees(tree):
    X = tree_metric(tree)
    outcome = run_pipeline("refinement", X, tree, PipelineOptions())
    assert not _failed(outcome), _failed(outcome)


@pytest.mark.parametrize("pipeline", ["canonical", "perturbed"])
@pytest.mark.parametrize("tree", seeded_trees(8, 7, seed=251, n_min=4), ids=_tree_id)
def test_tree_gradient_suites(tree, pipeline):
    X = tree_metric(tree)
    outcome = run_pipeline(pipeline, X, tree, PipelineOptions(order=compatible_order(tree)))
    assert not _failed(outcome), _failed(outcome)


@pytest.mark.parametrize("seed", range(4))
def test_refinement_on_generic_trees(seed):
    generator = np.random.default_rng(300 + seed)
    # weights from a wide range make distinct distances likely, not certain
    tree = random_tree(int(generator.integers(3, 7)), generator, 1, 10_000)
    X = tree_metric(tree)
    outcome = run_pipeline("refinement", X, tree, PipelineOptions(seed=seed))
    assert not _failed(outcome), _failed(outcome)


# === Morse Properties ===


@pytest.mark.parametrize("tree", seeded_trees(5, 7, seed=261), ids=lambda t: f"n{t.n}")
def test_collapses_preserve_homology(tree):
    X = tree_metric(tree)
    full = full_complex(X)
    skeleton = tree_complex(X, tree)
    for V in (canonical_gradient(X, full), perturbed_gradient(X, compatible_order(tree), full)):
        certificate = collapse(full, V, skeleton)
        remaining = replay_certificate(full, certificate)
        assert remaining == skeleton.simplices
        assert homology_oracle(skeleton) == [1, 0]
        assert homology_oracle(full)[0] == 1
        assert certificate.removed == len(full) - len(skeleton)


# === Persistence ===


@pytest.mark.parametrize("X", seeded_metrics(5, 7, seed=271), ids=lambda X: f"n{X.n}")
def test_shortcut_accounting(X):
    F = Filtration(full_complex(X))
    result = persistent_homology(F, max_degree=X.n - 2)
    total = result.stats.total
    assert total.apparent_skipped == 2 * len(result.apparent)
    assert total.columns == total.apparent_skipped + total.critical + total.reduced


@pytest.mark.parametrize("tree", SUITE_TREES, ids=_tree_id)
def test_reverse_compatible_order_needs_no_additions(tree):
    X = tree_metric(tree)
    F = Filtration(full_complex(X), compatible_order(tree).reversed(), SimplexOrdering.REVERSE_COLEX)
    result = persistent_homology(F, max_degree=X.n - 2)
    assert result.stats.additions_from(1) == 0


@pytest.mark.parametrize("X", seeded_metrics(16, 8, seed=281), ids=lambda X: f"n{X.n}")
def test_degree_one_surjectivity_on_random_metrics(X):
    outcome = run_pipeline("h1-surjectivity", X, None, PipelineOptions())
    assert not _failed(outcome), _failed(outcome)


@pytest.mark.parametrize("n", [4, 5, 6, 8])
def test_degree_one_surjectivity_on_cycles(n):
    outcome = run_pipeline("h1-surjectivity", cycle_graph_metric(n), None, PipelineOptions())
    assert not _failed(outcome), _failed(outcome)
    assert outcome.results["barcode"]["1"]


# === Metric Invariants ===


@pytest.mark.parametrize("tree", SUITE_TREES, ids=_tree_id)
def test_suite_tree_invariants(tree):
    X = tree_metric(tree)
    assert hyperbolicity(X).delta == 0
    assert geodesic_defect(X).nu == tree.max_edge_length / 2


@pytest.mark.parametrize("step", [Fraction(1), Fraction(1, 2)])
@pytest.mark.parametrize("seed", range(4))
def test_dense_samples_have_small_defect(seed, step):
    generator = np.random.default_rng(320 + seed)
    tree = random_tree(int(generator.integers(2, 5)), generator, 1, 3)
    sample = tree_metric(subdivide_tree(tree, step))
    # subdivision vertices are step/2-dense in the geodesic tree
    r = step / 2
    assert geodesic_defect(sample).nu <= r
    assert is_nu_geodesic(sample, r).holds


@pytest.mark.parametrize("X", seeded_metrics(5, 7, seed=301), ids=lambda X: f"n{X.n}")
def test_defect_is_the_least_geodesic_slack(X):
    nu = geodesic_defect(X).nu
    assert is_nu_geodesic(X, nu).holds
    if nu > 0:
        assert not is_nu_geodesic(X, nu / 2).holds
