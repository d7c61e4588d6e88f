"""Tests for the fractional chromatic number."""

from fractions import Fraction
from itertools import combinations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from forestconc.operations import (
    FractionalChromaticOperations,
    FractionalColoring,
    Graph,
    GraphFamilies,
    LipschitzVector,
    TailBoundOperations,
)

ops = FractionalChromaticOperations


def _clique_number(g: Graph) -> int:
    best = 1 if g.n else 0
    for size in range(2, g.n + 1):
        for members in combinations(range(g.n), size):
            if all(v in g.adjacency[u] for u, v in combinations(members, 2)):
                best = size
    return best


def _chromatic_number(g: Graph) -> int:
    for k in range(1, g.n + 1):
        for colors in product(range(k), repeat=g.n):
            if all(colors[u] != colors[v] for u, v in g.edges):
                return k
    return 0


small_graphs = st.integers(min_value=1, max_value=6).flatmap(
    lambda n: st.builds(
        lambda edges: Graph(n=n, edges=sorted(edges)),
        st.sets(st.sampled_from([(u, v) for u in range(n) for v in range(u + 1, n)]))
        if n > 1
        else st.just(set()),
    )
)


def test_edgeless_graph_is_one():
    value, coloring = ops.fractional_chromatic_number(GraphFamilies.edgeless(5))
    assert value == 1
    assert coloring.independent_sets == ((0, 1, 2, 3, 4),)


@pytest.mark.parametrize("k", range(1, 7))
def test_complete_graph(k):
    value, _ = ops.fractional_chromatic_number(GraphFamilies.complete(k))
    assert value == k


def test_five_cycle():
    value, coloring = ops.fractional_chromatic_number(GraphFamilies.cycle(5))
    assert value == Fraction(5, 2)
    assert coloring.total_weight == Fraction(5, 2)


@pytest.mark.parametrize(
    "g", [GraphFamilies.path(7), GraphFamilies.cycle(6), GraphFamilies.grid(3), GraphFamilies.star(4)]
)
def test_bipartite_graphs_are_two(g):
    value, _ = ops.fractional_chromatic_number(g)
    assert value == 2


def test_empty_graph():
    value, coloring = ops.fractional_chromatic_number(Graph(n=0))
    assert value == 0
    assert coloring.independent_sets == ()


def test_maximal_independent_sets_of_four_cycle():
    assert ops.maximal_independent_sets(GraphFamilies.cycle(4)) == [(0, 2), (1, 3)]


def test_budget_enforced():
    with pytest.raises(ValueError, match="budget"):
        ops.fractional_chromatic_number(GraphFamilies.cycle(15))


def test_verify_coloring_rejects_bad_certificates():
    g = GraphFamilies.path(3)
    dependent = FractionalColoring(independent_sets=((0, 1),), weights=(Fraction(1),))
    with pytest.raises(RuntimeError, match="not independent"):
        ops.verify_coloring(g, dependent, Fraction(1))
    short = FractionalColoring(independent_sets=((0, 2),), weights=(Fraction(1),))
    with pytest.raises(RuntimeError, match="below 1"):
        ops.verify_coloring(g, short, Fraction(1))


@pytest.mark.parametrize(
    "g, expected",
    [
        (Graph(n=0), None),
        (GraphFamilies.edgeless(100), Fraction(1)),
        (GraphFamilies.path(500), Fraction(2)),
        (GraphFamilies.cycle(7), Fraction(7, 3)),
        (GraphFamilies.cycle(15), None),
    ],
)
def test_chromatic_value(g, expected):
    assert ops.chromatic_value(g) == expected


@settings(max_examples=60, deadline=None)
@given(small_graphs)
def test_sandwiched_between_clique_and_chromatic_number(g):
    value, coloring = ops.fractional_chromatic_number(g)
    assert _clique_number(g) <= value <= _chromatic_number(g)
    ops.verify_coloring(g, coloring, value)


@pytest.mark.parametrize("n", [16, 17, 25, 50, 100, 1000])
def test_tree_bound_beats_janson_on_paths(n):
    g = GraphFamilies.path(n)
    c = LipschitzVector.uniform(n)
    janson = TailBoundOperations.janson_denominator(c, ops.chromatic_value(g))
    tree = TailBoundOperations.tree_denominator(g, c)
    assert Fraction(tree) / Fraction(janson) > Fraction(19, 10)
