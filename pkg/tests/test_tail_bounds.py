"""Tests for the closed-form tail bounds."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from forestconc.operations import (
    ForestApproximation,
    ForestComplexityOperations,
    Graph,
    GraphFamilies,
    LipschitzVector,
    TailBoundOperations,
)

ops = TailBoundOperations

coefficients = st.floats(min_value=0.01, max_value=10.0, allow_nan=False)
thresholds = st.floats(min_value=0.01, max_value=20.0, allow_nan=False)


def test_mcdiarmid_examples():
    assert ops.mcdiarmid_tail(LipschitzVector.uniform(8), 2).probability == pytest.approx(
        math.exp(-1), rel=1e-12
    )
    assert ops.mcdiarmid_tail(LipschitzVector(c=(1.0,)), 10).probability == pytest.approx(
        math.exp(-200), rel=1e-12
    )


def test_mcdiarmid_rejects_zero_vector_and_bad_t():
    with pytest.raises(ValueError, match="non-zero"):
        ops.mcdiarmid_tail(LipschitzVector.uniform(3, 0.0), 1)
    with pytest.raises(ValueError, match="threshold t"):
        ops.mcdiarmid_tail(LipschitzVector.uniform(3), 0)
    with pytest.raises(ValueError, match="threshold t"):
        ops.mcdiarmid_tail(LipschitzVector.uniform(3), -1)


def test_negative_coefficient_rejected():
    with pytest.raises(ValueError, match=r"c\[1\]"):
        LipschitzVector(c=(1.0, -0.5))


def test_janson_examples():
    c = LipschitzVector.uniform(10)
    assert ops.janson_tail(c, 2, 5).probability == pytest.approx(math.exp(-2.5), rel=1e-12)
    five = LipschitzVector.uniform(5)
    assert ops.janson_tail(five, Fraction(5, 2), math.sqrt(5)).probability == pytest.approx(
        math.exp(-0.8), rel=1e-12
    )
    assert ops.janson_tail(c, 1, 3).probability == ops.mcdiarmid_tail(c, 3).probability
    with pytest.raises(ValueError, match="at least 1"):
        ops.janson_tail(c, Fraction(1, 2), 1)


def test_tree_examples():
    k2 = GraphFamilies.complete(2)
    assert ops.tree_tail(k2, LipschitzVector.uniform(2), 1).probability == pytest.approx(
        math.exp(-0.4), rel=1e-12
    )
    star = GraphFamilies.star(3)
    assert ops.tree_tail(star, LipschitzVector.uniform(4), 2).probability == pytest.approx(
        math.exp(-8 / 13), rel=1e-12
    )
    p3 = GraphFamilies.path(3)
    assert ops.tree_denominator(p3, LipschitzVector(c=(1.0, 0.5, 1.0))) == pytest.approx(4.75)


def test_tree_rejects_cycles_and_forests():
    with pytest.raises(ValueError, match="tree"):
        ops.tree_tail(GraphFamilies.cycle(4), LipschitzVector.uniform(4), 1)
    with pytest.raises(ValueError, match="tree"):
        ops.tree_tail(GraphFamilies.edgeless(3), LipschitzVector.uniform(3), 1)


def test_forest_examples():
    two_k2 = Graph(n=4, edges=[(0, 1), (2, 3)])
    assert ops.forest_tail(two_k2, LipschitzVector.uniform(4), 1).probability == pytest.approx(
        math.exp(-0.2), rel=1e-12
    )
    with pytest.raises(ValueError, match="acyclic"):
        ops.forest_tail(GraphFamilies.cycle(3), LipschitzVector.uniform(3), 1)
    with pytest.raises(ValueError, match="entries"):
        ops.forest_tail(two_k2, LipschitzVector.uniform(3), 1)


def test_general_examples():
    assert ops.general_tail(100, 0.01, 0.1).probability == pytest.approx(math.exp(-2), rel=1e-12)
    with pytest.raises(ValueError, match="at least 1"):
        ops.general_tail(0, 1.0, 1.0)
    with pytest.raises(ValueError, match="c_inf"):
        ops.general_tail(5, 0.0, 1.0)


def test_invert_tail_examples():
    assert ops.invert_tail(2, math.exp(-1)) == pytest.approx(1.0, rel=1e-12)
    # sqrt(5 ln 20 / 2) = 2.73666...
    assert ops.invert_tail(5, 0.05) == pytest.approx(2.7362, abs=1e-3)
    for delta in (0.0, 1.0, -0.1, 1.5):
        with pytest.raises(ValueError, match="strictly between"):
            ops.invert_tail(5, delta)


def test_bounds_are_clamped_but_keep_raw_value():
    bound = ops.evaluate("general", 4.0, 0.0)
    assert bound.probability == 1.0
    assert bound.raw == 1.0
    assert ops.evaluate("general", 4.0, 1.0).probability < 1.0


def test_tightest_prefers_smallest_denominator():
    bounds = [ops.evaluate("general", 9.0, 1.0), ops.evaluate("tree", 5.0, 1.0)]
    assert ops.tightest(bounds).family == "tree"
    with pytest.raises(ValueError):
        ops.tightest([])


def test_approximation_of_fold_matches_lambda_for_uniform_c():
    g = GraphFamilies.cycle(6)
    fa = ForestComplexityOperations.cycle_upper_bound(6).witness
    assert ops.approximation_denominator(g, fa, LipschitzVector.uniform(6)) == 35.0


def test_approximation_tail_on_folded_cycle():
    g = GraphFamilies.cycle(6)
    fa = ForestComplexityOperations.cycle_upper_bound(6).witness
    tail = ops.approximation_tail(g, fa, LipschitzVector.uniform(6), 1.0)
    assert tail.family == "approximation"
    assert tail.probability == pytest.approx(math.exp(-2 / 35), rel=1e-12)


def test_approximation_rejects_invalid_witness():
    g = GraphFamilies.cycle(4)
    fa = ForestApproximation.from_labels(GraphFamilies.path(4), [0, 1, 2, 3])
    with pytest.raises(ValueError, match="not adjacent in F"):
        ops.approximation_denominator(g, fa, LipschitzVector.uniform(4))


@given(st.lists(coefficients, min_size=1, max_size=20), thresholds, st.floats(0.1, 10.0))
def test_mcdiarmid_scale_invariance(c, t, alpha):
    plain = ops.mcdiarmid_tail(LipschitzVector(c=tuple(c)), t).raw
    scaled = ops.mcdiarmid_tail(LipschitzVector(c=tuple(alpha * ci for ci in c)), alpha * t).raw
    assert scaled == pytest.approx(plain, rel=1e-9, abs=1e-300)


@given(st.integers(1, 10_000), coefficients, st.floats(0.01, 5.0))
def test_doubling_t_raises_bound_to_fourth_power(lambda_g, c_inf, t):
    once = ops.general_tail(lambda_g, c_inf, t).raw
    twice = ops.general_tail(lambda_g, c_inf, 2 * t).raw
    assert twice == pytest.approx(once**4, rel=1e-9, abs=1e-300)


@given(st.floats(0.1, 1e4), st.floats(1e-6, 0.999))
def test_invert_tail_round_trip(denominator, delta):
    t = ops.invert_tail(denominator, delta)
    assert ops.evaluate("general", denominator, t).raw == pytest.approx(delta, rel=1e-12)


@given(st.lists(coefficients, min_size=1, max_size=30), thresholds)
def test_bounds_decrease_in_t_and_stay_in_unit_interval(c, t):
    vector = LipschitzVector(c=tuple(c))
    lower = ops.mcdiarmid_tail(vector, t).probability
    higher = ops.mcdiarmid_tail(vector, t + 1.0).probability
    assert 0.0 <= higher <= lower <= 1.0
    assert higher < lower or lower == 0.0


@settings(max_examples=100)
@given(st.integers(1, 40), coefficients, thresholds)
def test_edgeless_graph_degenerates_to_independent_case(n, value, t):
    g = GraphFamilies.edgeless(n)
    c = LipschitzVector.uniform(n, value)
    independent = ops.mcdiarmid_tail(c, t).probability
    assert ops.forest_tail(g, c, t).probability == pytest.approx(independent, rel=1e-12)
    lambda_g = ForestComplexityOperations.identity_upper_bound(g).value
    assert lambda_g == n
    assert ops.general_tail(lambda_g, value, t).probability == pytest.approx(independent, rel=1e-12)
    assert ops.janson_tail(c, 1, t).probability == pytest.approx(independent, rel=1e-12)


@given(st.integers(2, 40), st.integers(0, 10_000), thresholds)
def test_single_tree_forest_equals_tree(n, seed, t):
    g = GraphFamilies.random_tree(n, seed)
    c = LipschitzVector.uniform(n)
    assert ops.forest_tail(g, c, t).probability == ops.tree_tail(g, c, t).probability


@given(st.integers(2, 40), st.integers(0, 10_000), st.data())
def test_general_never_tighter_than_tree(n, seed, data):
    g = GraphFamilies.random_tree(n, seed)
    c = LipschitzVector(c=tuple(data.draw(st.lists(coefficients, min_size=n, max_size=n))))
    lambda_g = ForestComplexityOperations.identity_upper_bound(g).value
    general = ops.general_denominator(lambda_g, c.l_inf)
    assert general >= ops.tree_denominator(g, c) * (1 - 1e-12)


@given(st.lists(coefficients, min_size=6, max_size=6))
def test_approximation_never_looser_than_general(c):
    g = GraphFamilies.cycle(6)
    witness = ForestComplexityOperations.cycle_upper_bound(6)
    vector = LipschitzVector(c=tuple(c))
    approximation = ops.approximation_denominator(g, witness.witness, vector)
    general = ops.general_denominator(witness.value, vector.l_inf)
    assert approximation <= general * (1 + 1e-12)
