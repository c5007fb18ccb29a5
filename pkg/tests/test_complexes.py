"""Tests for simplices, Vietoris-Rips complexes and their filtrations."""

from itertools import combinations

import numpy as np
import pytest

from complexes.filtration import Comparison, Filtration, SimplexOrdering, diam_lex_compare
from complexes.rips import dump_complex, full_complex, subforest, vietoris_rips
from complexes.simplex import VertexOrder, closure, facets, is_facet, simplex
from conftest import seeded_metrics
from errors import BudgetExceededError, InvalidParameterError

pytestmark = pytest.mark.unit


# === Simplex Tests ===


def test_simplex_is_sorted_and_deduplicated():
    assert simplex([2, 0, 2]) == (0, 2)
    with pytest.raises(ValueError):
        simplex([])


def test_facets():
    assert facets((0, 1, 2)) == [(0, 1), (0, 2), (1, 2)]
    assert facets((3,)) == []
    assert is_facet((0, 2), (0, 1, 2))
    assert not is_facet((0,), (0, 1, 2))


def test_closure_of_triangle():
    assert closure([(0, 1, 2)]) == {(0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2)}


def test_vertex_order_keys():
    order = VertexOrder((2, 0, 1))
    assert order.rank(2) == 0
    assert order.min_vertex([0, 1]) == 0
    assert order.lex_key((0, 2)) == (0, 1)
    assert order.reversed().sequence == (1, 0, 2)
    with pytest.raises(ValueError):
        VertexOrder((0, 0, 1))


# === Vietoris-Rips Tests ===


def test_star_at_two_is_full_complex(star):
    K = vietoris_rips(star, 2)
    assert len(K) == 15
    assert K.dimension == 3
    assert K.is_closed()


def test_scale_zero_gives_vertices(star):
    K = vietoris_rips(star, 0)
    assert sorted(K) == [(0,), (1,), (2,), (3,)]


def test_generic_tree_at_five(generic):
    K = vietoris_rips(generic, 5)
    assert (0, 3) in K  # d(a,d) = 5
    assert (2, 3) not in K  # d(c,d) = 6


def test_dimension_cap(star):
    K = vietoris_rips(star, 2, dim_cap=1)
    assert len(K) == 10
    assert K.dimension == 1


def test_negative_scale_rejected(star):
    with pytest.raises(InvalidParameterError):
        vietoris_rips(star, -1)


def test_simplex_budget(star):
    with pytest.raises(BudgetExceededError) as exc_info:
        vietoris_rips(star, 2, budget=5)
    assert exc_info.value.limit == 5


def test_cofacets(star_full):
    assert star_full.cofacets((0, 2)) == [(0, 1, 2), (0, 2, 3)]
    assert star_full.cofacets((0, 1, 2, 3)) == []


def test_subforest(generic_tree, generic):
    forest = subforest(generic_tree, 3, generic)
    assert forest.by_dimension(1) == [(0, 1), (1, 2)]
    assert len(subforest(generic_tree, 0, generic)) == 4
    assert len(subforest(generic_tree, 4, generic)) == 7


def test_euler_characteristic_of_full_complex(star_full):
    assert star_full.euler_characteristic() == 1


def test_dump_lists_diameters(star):
    lines = dump_complex(vietoris_rips(star, 1)).splitlines()
    assert lines[0] == "a : 0"
    assert lines[-1] == "b d : 1"
    assert len(lines) == 7


@pytest.mark.parametrize("X", seeded_metrics(4, 7), ids=lambda X: f"n{X.n}")
def test_rips_complexes_are_nested(X):
    complexes = [vietoris_rips(X, t) for t in X.levels]
    for smaller, larger in zip(complexes, complexes[1:]):
        assert smaller.simplices <= larger.simplices
    assert len(complexes[-1]) == 2**X.n - 1


@pytest.mark.parametrize("X", seeded_metrics(3, 7, seed=13), ids=lambda X: f"n{X.n}")
def test_clique_property(X):
    for sigma in full_complex(X):
        edge_levels = [X.level(a, b) for a, b in combinations(sigma, 2)]
        assert X.diameter_level(sigma) == max(edge_levels, default=0)


# === Filtration Tests ===


def test_diam_lex_compare(star, star_full):
    F = Filtration(star_full)
    assert diam_lex_compare((0, 2), (0, 3), F) is Comparison.LESS
    assert diam_lex_compare((1, 2), (0, 2), F) is Comparison.LESS
    assert diam_lex_compare((0, 2), (0, 1, 2), F) is Comparison.LESS
    assert diam_lex_compare((0, 1, 2), (0, 2), F) is Comparison.GREATER
    assert diam_lex_compare((0, 2), (0, 2), F) is Comparison.EQUAL


def test_filtration_is_strict_total_order(rng):
    X = seeded_metrics(1, 6, seed=17)[0]
    F = Filtration(full_complex(X), VertexOrder(tuple(int(v) for v in rng.permutation(X.n))))
    keys = [F.key(s) for s in F]
    assert keys == sorted(keys)
    assert len(set(keys)) == len(keys)
    picks = rng.integers(0, len(F), size=(50, 2))
    for i, j in picks:
        a, b = F.simplices[int(i)], F.simplices[int(j)]
        forward, backward = F.compare(a, b), F.compare(b, a)
        if a == b:
            assert forward is Comparison.EQUAL
        else:
            assert {forward, backward} == {Comparison.LESS, Comparison.GREATER}


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_reverse_colex_matches_reversed_lex(seed):
    generator = np.random.default_rng(seed)
    X = seeded_metrics(1, 7, seed=seed)[0]
    K = full_complex(X)
    order = VertexOrder(tuple(int(v) for v in generator.permutation(X.n)))
    colex = Filtration(K, order, SimplexOrdering.REVERSE_COLEX)
    reversed_lex = Filtration(K, order.reversed())
    assert colex.simplices == reversed_lex.simplices
