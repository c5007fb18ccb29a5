"""Tests for column reduction, the apparent-pair shortcut and the homology oracles."""

from fractions import Fraction

import numpy as np
import pytest

from complexes.filtration import Filtration
from complexes.rips import SimplicialComplex, full_complex, subforest, vietoris_rips
from complexes.simplex import VertexOrder
from conftest import seeded_metrics, seeded_trees
from errors import BudgetExceededError, InvalidParameterError
from metric.generators import cycle_graph_metric
from metric.invariants import geodesic_defect
from metric.trees import compatible_order, tree_metric
from persistence.oracle import gf2_rank, h1_surjectivity_check, homology_oracle, union_find_barcode
from persistence.reduction import Barcode, persistent_homology

pytestmark = pytest.mark.unit


def _sorted(intervals):
    return sorted(intervals, key=lambda i: (i[0], i[1] is None, i[1] or 0))


# === Barcode Tests ===


def test_star_barcode(star_full):
    result = persistent_homology(Filtration(star_full), max_degree=2)
    assert _sorted(result.barcode.degree(0)) == [(0, 1), (0, 1), (0, 1), (0, None)]
    assert result.barcode.degree(1) == []
    assert result.barcode.degree(2) == []
    # the level-2 edges die in the same level
    assert len(result.barcode.zero_length[1]) == 3


def test_union_find_matches_degree_zero(star, star_full):
    barcode = persistent_homology(Filtration(star_full), max_degree=0).barcode
    assert _sorted(union_find_barcode(star)) == _sorted(barcode.degree(0))


@pytest.mark.parametrize("X", seeded_metrics(4, 7, seed=111), ids=lambda X: f"n{X.n}")
def test_union_find_matches_reduction(X):
    barcode = persistent_homology(Filtration(full_complex(X, dim_cap=1)), max_degree=0).barcode
    assert _sorted(union_find_barcode(X)) == _sorted(barcode.degree(0))


def test_four_cycle_has_one_loop():
    X = cycle_graph_metric(4)
    barcode = persistent_homology(Filtration(full_complex(X))).barcode
    assert barcode.degree(1) == [(1, 2)]


def test_table_and_json(two_points):
    barcode = persistent_homology(Filtration(full_complex(two_points)), max_degree=0).barcode
    assert barcode.to_json() == {"0": [[0, 1], [0, None]]}
    assert barcode.table().splitlines()[-1].endswith("inf")


# === Shortcut Tests ===


@pytest.mark.parametrize("X", seeded_metrics(5, 7, seed=121), ids=lambda X: f"n{X.n}")
def test_shortcut_does_not_change_the_barcode(X):
    F = Filtration(full_complex(X, dim_cap=2))
    fast = persistent_homology(F, use_shortcut=True)
    slow = persistent_homology(F, use_shortcut=False)
    for k in (0, 1):
        assert _sorted(fast.barcode.degree(k)) == _sorted(slow.barcode.degree(k))
    assert fast.stats.total.columns == slow.stats.total.columns == len(F)
    assert slow.stats.total.apparent_skipped == 0
    assert fast.stats.total.additions <= slow.stats.total.additions


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_barcode_does_not_depend_on_vertex_order(seed):
    X = seeded_metrics(1, 6, seed=130 + seed)[0]
    K = full_complex(X, dim_cap=2)
    order = VertexOrder(tuple(int(v) for v in np.random.default_rng(seed).permutation(X.n)))
    identity = persistent_homology(Filtration(K)).barcode
    permuted = persistent_homology(Filtration(K, order)).barcode
    assert identity.to_json() == permuted.to_json()


@pytest.mark.parametrize("tree", seeded_trees(5, 7, seed=141), ids=lambda t: f"n{t.n}")
def test_trees_need_no_additions_above_degree_zero(tree):
    X = tree_metric(tree)
    F = Filtration(full_complex(X), compatible_order(tree))
    result = persistent_homology(F, max_degree=X.n - 1)
    assert result.stats.additions_from(1) == 0
    for k in range(1, X.n):
        assert result.barcode.degree(k) == []


def test_counterexample_needs_work_in_degree_one(counterexample):
    result = persistent_homology(Filtration(full_complex(counterexample)))
    degree_one = result.stats.at(1)
    assert degree_one.critical + degree_one.reduced >= 1
    assert result.barcode.degree(1) == []


# === Error Tests ===


def test_column_budget(star_full):
    with pytest.raises(BudgetExceededError) as exc_info:
        persistent_homology(Filtration(star_full), budget=5)
    assert exc_info.value.limit == 5


def test_negative_degree(star_full):
    with pytest.raises(InvalidParameterError):
        persistent_homology(Filtration(star_full), max_degree=-1)


def test_cap_too_low_for_degree(star):
    with pytest.raises(InvalidParameterError):
        persistent_homology(Filtration(full_complex(star, dim_cap=1)), max_degree=1)


# === Oracle Tests ===


@pytest.mark.parametrize(
    "rows,expected",
    [
        ([[1, 1], [1, 1]], 1),
        ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 3),
        ([[1, 1, 0], [0, 1, 1], [1, 0, 1]], 2),
        ([[0, 0], [0, 0]], 0),
    ],
)
def test_gf2_rank(rows, expected):
    assert gf2_rank(np.array(rows, dtype=bool)) == expected


def test_gf2_rank_of_empty_matrix():
    assert gf2_rank(np.zeros((0, 3), dtype=bool)) == 0


def test_oracle_on_contractible_complex(star_full):
    assert homology_oracle(star_full) == [1, 0, 0, 0]


def test_oracle_on_triangle_boundary(triangle):
    boundary = SimplicialComplex(triangle, [(0,), (1,), (2,), (0, 1), (0, 2), (1, 2)])
    assert homology_oracle(boundary) == [1, 1]


def test_oracle_counts_components(generic, generic_tree):
    # the triangle abc at scale 3 with d still apart
    assert homology_oracle(vietoris_rips(generic, 3)) == [2, 0, 0]
    assert homology_oracle(subforest(generic_tree, 3, generic)) == [2, 0]


def test_oracle_budget(star_full):
    with pytest.raises(BudgetExceededError):
        homology_oracle(star_full, budget=3)


# === Degree-One Surjectivity Tests ===


@pytest.mark.parametrize("tree", seeded_trees(3, 7, seed=151), ids=lambda t: f"n{t.n}")
def test_trees_have_no_late_loops(tree):
    X = tree_metric(tree)
    check = h1_surjectivity_check(X, geodesic_defect(X).nu)
    assert check.holds


def test_four_cycle_loop_is_born_within_bound():
    X = cycle_graph_metric(4)
    nu = geodesic_defect(X).nu
    assert nu == Fraction(1, 2)
    check = h1_surjectivity_check(X, nu)
    assert check.holds
    assert check.bound == 1


def test_late_loop_is_reported(star):
    barcode = Barcode({1: [(Fraction(3), None)]})
    check = h1_surjectivity_check(star, Fraction(1), barcode)
    assert not check.holds
    assert check.witness == (Fraction(3), None)


def test_negative_nu_rejected(star):
    with pytest.raises(InvalidParameterError):
        h1_surjectivity_check(star, Fraction(-1))
