"""Tests for forest approximations, closed-form constructions and the exact oracle."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from forestconc.operations import (
    ForestApproximation,
    ForestComplexityOperations,
    Graph,
    GraphFamilies,
    GraphOperations,
    VertexPartition,
)

ops = ForestComplexityOperations


@pytest.mark.parametrize("n", range(2, 51))
def test_identity_on_paths_and_trees(n):
    assert ops.identity_upper_bound(GraphFamilies.path(n)).value == 4 * n - 3
    assert ops.identity_upper_bound(GraphFamilies.random_tree(n, seed=n)).value == 4 * n - 3


@pytest.mark.parametrize("n", range(4, 51))
def test_cycle_construction(n):
    expected = 8 * n - 13 if n % 2 == 0 else 8 * n - 14
    assert ops.cycle_upper_bound(n).value == expected


@pytest.mark.parametrize("m", range(2, 11))
def test_grid_construction(m):
    assert ops.grid_upper_bound(m).value == (2 * m * (2 * m + 1) * (2 * m - 1) - 3) // 3


def test_grid_four_value():
    assert ops.grid_upper_bound(4).value == 167


@pytest.mark.parametrize("n", list(range(1, 201, 13)) + [200])
@pytest.mark.parametrize("m", range(1, 11))
def test_m_dependent_construction_within_4mn(n, m):
    result = ops.m_dependent_upper_bound(n, m)
    assert result.value <= 4 * m * n
    if n % m == 0:
        assert result.value == (n // m - 1) * 4 * m * m + m * m


def test_diameter_heuristic_values():
    assert ops.diameter_heuristic(GraphFamilies.cycle(6)).value == 35
    assert ops.diameter_heuristic(GraphFamilies.grid(3)).value == 69
    assert ops.diameter_heuristic(GraphFamilies.path(5)).value == 17


def test_merge_all_is_n_squared():
    assert ops.merge_all_upper_bound(GraphFamilies.complete(5)).value == 25


@pytest.mark.parametrize(
    "g, expected",
    [
        (Graph(n=0), 0),
        (Graph(n=1), 1),
        (GraphFamilies.edgeless(3), 3),
        (GraphFamilies.complete(2), 4),
        (GraphFamilies.complete(3), 9),
        (GraphFamilies.cycle(4), 16),
    ],
)
def test_exact_small_values(g, expected):
    result = ops.exact_forest_complexity(g)
    assert result.exact
    assert result.value == expected
    assert ops.lambda_value(g, result.witness) == expected


def test_exact_path_matches_identity():
    assert ops.exact_forest_complexity(GraphFamilies.path(5)).value <= 17


def test_exact_respects_budget():
    with pytest.raises(ValueError, match="budget"):
        ops.exact_forest_complexity(GraphFamilies.path(13))


def test_lambda_value_rejects_invalid_approximation():
    g = GraphFamilies.cycle(4)
    fa = ForestApproximation(
        partition=VertexPartition.singletons(4), forest=GraphFamilies.path(4)
    )
    with pytest.raises(ValueError, match="not adjacent in F"):
        ops.lambda_value(g, fa)


def test_validate_approximation_checks_coverage():
    fa = ForestApproximation.from_labels(GraphFamilies.path(3), [0, 0, 1])
    ops.validate_approximation(GraphFamilies.path(3), fa)
    with pytest.raises(ValueError, match="covers 3 vertices but the graph has 4"):
        ops.validate_approximation(GraphFamilies.path(4), fa)


def test_forest_approximation_requires_acyclic_forest():
    with pytest.raises(ValueError, match="forest"):
        ForestApproximation.from_labels(GraphFamilies.cycle(4), [0, 1, 2, 3])


def test_identity_requires_forest():
    with pytest.raises(ValueError, match="forest"):
        ops.identity_approximation(GraphFamilies.cycle(3))


def test_applicable_constructions_recognize_families():
    methods = {r.method for r in ops.applicable_constructions(GraphFamilies.cycle(8))}
    assert "cycle_fold" in methods
    methods = {r.method for r in ops.applicable_constructions(GraphFamilies.grid(3))}
    assert "grid_antidiagonal" in methods
    methods = {r.method for r in ops.applicable_constructions(GraphFamilies.m_dependent_chain(9, 2))}
    assert "m_dependent_blocks" in methods
    methods = {r.method for r in ops.applicable_constructions(GraphFamilies.path(9))}
    assert "identity" in methods


def test_best_upper_bound_large_cycle():
    result = ops.best_upper_bound(GraphFamilies.cycle(20))
    assert not result.exact
    assert result.value == 8 * 20 - 13


def _small_family_graphs():
    graphs = [GraphFamilies.cycle(n) for n in range(3, 11)]
    graphs += [GraphFamilies.path(n) for n in range(2, 11)]
    graphs += [GraphFamilies.grid(2), GraphFamilies.grid(3)]
    graphs += [GraphFamilies.m_dependent_chain(n, m) for n in range(3, 11) for m in (1, 2, 3)]
    return graphs


@pytest.mark.slow
@pytest.mark.parametrize("g", _small_family_graphs())
def test_oracle_never_above_constructions(g):
    exact = ops.exact_forest_complexity(g)
    assert ops.lambda_value(g, exact.witness) == exact.value
    for construction in ops.applicable_constructions(g):
        assert exact.value <= construction.value


def _graphs(max_n):
    return st.integers(min_value=1, max_value=max_n).flatmap(
        lambda n: st.builds(
            lambda edges: Graph(n=n, edges=sorted(edges)),
            st.sets(st.sampled_from([(u, v) for u in range(n) for v in range(u + 1, n)]))
            if n > 1
            else st.just(set()),
        )
    )


def _restricted_growth(n):
    if n == 0:
        yield []
        return
    for head in _restricted_growth(n - 1):
        for label in range(max(head, default=-1) + 2):
            yield [*head, label]


def _brute_force_lambda(g):
    best = None
    for labels in _restricted_growth(g.n):
        partition = VertexPartition.from_labels(labels)
        quotient = GraphOperations.quotient(g, partition)
        if not GraphOperations.is_forest(quotient):
            continue
        value = ops.lambda_value(g, ForestApproximation(partition=partition, forest=quotient))
        best = value if best is None else min(best, value)
    return best


@settings(max_examples=60, deadline=None)
@given(_graphs(6))
def test_oracle_matches_exhaustive_search(g):
    assert ops.exact_forest_complexity(g).value == _brute_force_lambda(g)


@settings(max_examples=40, deadline=None)
@given(_graphs(6).filter(lambda g: g.edges), st.data())
def test_removing_an_edge_never_raises_complexity(g, data):
    dropped = data.draw(st.sampled_from(g.edges))
    smaller = Graph(n=g.n, edges=[e for e in g.edges if e != dropped])
    assert ops.exact_forest_complexity(smaller).value <= ops.exact_forest_complexity(g).value


@settings(max_examples=40, deadline=None)
@given(_graphs(6))
def test_joining_two_trees_strictly_raises_lambda(g):
    witness = ops.exact_forest_complexity(g).witness
    trees = GraphOperations.connected_components(witness.forest)
    if len(trees) < 2:
        return
    joined = Graph(n=witness.forest.n, edges=[*witness.forest.edges, (min(trees[0]), min(trees[1]))])
    wider = ForestApproximation(partition=witness.partition, forest=joined)
    assert ops.lambda_value(g, wider) > ops.lambda_value(g, witness)


@settings(max_examples=25, deadline=None)
@given(_graphs(8))
def test_oracle_never_above_constructions_on_random_graphs(g):
    exact = ops.exact_forest_complexity(g)
    assert exact.value >= g.n
    for construction in ops.applicable_constructions(g):
        assert exact.value <= construction.value


def test_edgeless_graph_at_budget_is_fast():
    result = ops.exact_forest_complexity(GraphFamilies.edgeless(12))
    assert result.exact
    assert result.value == 12
    assert result.witness.partition == VertexPartition.singletons(12)
