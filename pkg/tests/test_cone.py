"""Tests for cone gradients and the filtered cone gradient."""

from fractions import Fraction

import pytest

from complexes.rips import SimplicialComplex, full_complex
from conftest import seeded_trees
from errors import InvalidParameterError, NoApexError, ThresholdError
from gradients.cone import cone_gradient, filtered_cone_gradient, point_order
from metric.generators import cycle_graph_metric
from metric.parsers import load_metric
from metric.trees import tree_metric
from morse.collapse import collapse, replay_certificate
from morse.gradient import GradientInterval
from morse.validation import critical_cells, validate_gradient

pytestmark = pytest.mark.unit


def _point(X, p):
    return SimplicialComplex(X, [(p,)])


# === Cone Gradient Tests ===


def test_point_order(star):
    assert point_order(star, 1) == (1, 0, 2, 3)
    assert point_order(star, 0) == (0, 1, 2, 3)


def test_star_cones_to_center(star, star_full):
    result = cone_gradient(star, 2, p=1)
    assert all(s.apex == 1 for s in result.strata[1:])
    assert result.strata[0].apex is None
    report = validate_gradient(star_full, result.gradient, _point(star, 1), check_diameter=False)
    assert report.passed, report.summary()
    assert critical_cells(result.gradient, star_full) == [(1,)]


def test_two_points_single_pair(two_points):
    result = cone_gradient(two_points, 1, p=0)
    assert result.gradient.intervals == (GradientInterval((1,), (0, 1)),)


def test_counterexample_collapses_at_threshold(counterexample):
    result = cone_gradient(counterexample, 14, p=0)
    K = full_complex(counterexample).restrict_to_level(result.level)
    certificate = collapse(K, result.gradient, _point(counterexample, 0))
    assert replay_certificate(K, certificate) == frozenset({(0,)})
    # e is too far from a and is coned off through d
    assert result.strata[-1].vertex == 4
    assert result.strata[-1].apex == 3


def test_threshold_is_enforced(star):
    with pytest.raises(ThresholdError):
        cone_gradient(star, Fraction(1, 2), p=1)


def test_missing_apex_reports_index():
    with pytest.raises(NoApexError) as exc_info:
        cone_gradient(cycle_graph_metric(4), 1, p=0, force=True)
    assert exc_info.value.index == 4


def test_base_point_must_exist(star):
    with pytest.raises(InvalidParameterError):
        cone_gradient(star, 2, p=7)


@pytest.mark.parametrize("tree", seeded_trees(5, 7, seed=81), ids=lambda t: f"n{t.n}")
def test_strata_are_strong_collapses(tree):
    X = tree_metric(tree)
    result = cone_gradient(X, X.max_distance, p=0)
    for stratum in result.strata:
        for interval in stratum.intervals:
            assert interval.free == (stratum.apex,)


# === Filtered Cone Tests ===


def test_filtered_cone_on_counterexample(counterexample):
    full = full_complex(counterexample)
    result = filtered_cone_gradient(counterexample, 0, full)
    assert (result.delta, result.nu, result.threshold) == (1, 5, 14)
    assert counterexample.levels[result.base_level] == 10
    assert critical_cells(result.gradient, full) == [(0,)]
    report = validate_gradient(full, result.gradient, _point(counterexample, 0), check_diameter=False)
    assert report.passed, report.summary()

    # VR_15 onto VR_14, which the apparent pairs cannot do
    upper = counterexample.level_index(15)
    K, L = full.restrict_to_level(upper), full.restrict_to_level(result.base_level)
    certificate = collapse(K, result.between(result.base_level, upper), L)
    assert replay_certificate(K, certificate) == L.simplices


def test_filtered_cone_of_single_point():
    X = load_metric("")
    result = filtered_cone_gradient(X)
    assert len(result.gradient) == 0
    assert critical_cells(result.gradient, full_complex(X)) == [(0,)]


@pytest.mark.parametrize("tree", seeded_trees(5, 7, seed=91), ids=lambda t: f"n{t.n}")
def test_tree_metrics_collapse_through_every_level(tree):
    X = tree_metric(tree)
    full = full_complex(X)
    result = filtered_cone_gradient(X, 0, full)
    assert result.threshold == tree.max_edge_length
    for level in range(result.base_level + 1, len(X.levels)):
        K, L = full.restrict_to_level(level), full.restrict_to_level(level - 1)
        certificate = collapse(K, result.between(level - 1, level), L)
        assert replay_certificate(K, certificate) == L.simplices
    base = full.restrict_to_level(result.base_level)
    certificate = collapse(base, result.up_to(result.base_level), _point(X, 0))
    assert replay_certificate(base, certificate) == frozenset({(0,)})
