"""Tests for the dependent samplers."""

import math

import numpy as np
import pytest

from forestconc.operations import (
    DependentSampler,
    Graph,
    GraphFamilies,
    SamplerOperations,
)

ops = SamplerOperations
TRIALS = 200_000


def test_edge_generator_neighbors_are_correlated():
    sampler = DependentSampler.edge_generator(GraphFamilies.complete(2))
    assert ops.empirical_correlation(sampler, 0, 1, TRIALS, seed=1) == pytest.approx(0.5, abs=0.02)


def test_edge_generator_non_neighbors_are_independent():
    sampler = DependentSampler.edge_generator(GraphFamilies.path(4))
    assert ops.empirical_correlation(sampler, 0, 3, TRIALS, seed=2) == pytest.approx(0.0, abs=0.02)


def test_m_dependent_correlation_profile():
    sampler = DependentSampler.m_dependent(10, 1)
    assert ops.empirical_correlation(sampler, 3, 4, TRIALS, seed=3) == pytest.approx(0.5, abs=0.02)
    assert ops.empirical_correlation(sampler, 3, 5, TRIALS, seed=3) == pytest.approx(0.0, abs=0.02)
    wide = DependentSampler.m_dependent(10, 3)
    assert ops.empirical_correlation(wide, 0, 7, TRIALS, seed=4) == pytest.approx(0.0, abs=0.02)


def test_identical_regions_give_identical_variables():
    region = (0.1, 0.1, 0.6, 0.6)
    sampler = DependentSampler.poisson_regions([region, region], intensity=20.0, cap=5)
    draws = ops.draw(sampler, 5000, ops.stream(5, 0))
    np.testing.assert_array_equal(draws[:, 0], draws[:, 1])
    assert sampler.graph.edges == ((0, 1),)


def test_disjoint_regions_are_independent():
    sampler = DependentSampler.poisson_regions(
        [(0.0, 0.0, 0.4, 0.4), (0.6, 0.6, 1.0, 1.0)], intensity=20.0, cap=5
    )
    assert sampler.graph.edges == ()
    assert ops.empirical_correlation(sampler, 0, 1, TRIALS, seed=6) == pytest.approx(0.0, abs=0.02)


def test_poisson_capped_mean():
    # count ~ Poisson(1) capped at 3: E[min(N, 3)] / 3 = 1 - (11/6) / e
    sampler = DependentSampler.poisson_regions([(0.25, 0.25, 0.75, 0.75)], intensity=4.0, cap=3)
    values = ops.function_values(sampler, [1.0], TRIALS, seed=7)
    assert values.mean() == pytest.approx(1 - 11 / 6 / math.e, abs=0.01)
    assert set(np.unique(values)) <= {0.0, 1 / 3, 2 / 3, 1.0}


@pytest.mark.parametrize(
    "sampler",
    [
        DependentSampler.edge_generator(GraphFamilies.cycle(7)),
        DependentSampler.m_dependent(12, 2),
        DependentSampler.poisson_regions(
            [(0.0, 0.0, 0.5, 0.5), (0.3, 0.3, 0.9, 0.8), (0.7, 0.0, 1.0, 0.2)]
        ),
    ],
)
def test_draws_stay_in_unit_cube(sampler):
    draws = ops.draw(sampler, 2000, ops.stream(8, 1))
    assert draws.shape == (2000, sampler.n)
    assert draws.min() >= 0.0
    assert draws.max() <= 1.0


def test_edge_generator_mean_is_one_half():
    sampler = DependentSampler.edge_generator(GraphFamilies.star(4))
    values = ops.function_values(sampler, [1.0] * 5, 50_000, seed=9)
    assert sampler.variable_mean == 0.5
    assert values.mean() == pytest.approx(2.5, abs=0.02)


@pytest.mark.parametrize(
    "sampler, pairs",
    [
        (DependentSampler.edge_generator(GraphFamilies.path(6)), [(0, 2), (0, 5), (1, 4)]),
        (DependentSampler.m_dependent(10, 2), [(0, 3), (2, 9), (4, 7)]),
        (
            DependentSampler.poisson_regions(
                [(0.0, 0.0, 0.3, 0.3), (0.5, 0.0, 0.8, 0.3), (0.2, 0.6, 0.5, 0.9)], intensity=20.0
            ),
            [(0, 1), (0, 2), (1, 2)],
        ),
    ],
)
def test_non_adjacent_pairs_are_uncorrelated(sampler, pairs):
    for seed, (i, j) in enumerate(pairs, start=20):
        assert j not in sampler.graph.adjacency[i]
        assert abs(ops.empirical_correlation(sampler, i, j, TRIALS, seed=seed)) < 4 / math.sqrt(TRIALS)


def test_m_dependent_mean_matches_exact_value():
    sampler = DependentSampler.m_dependent(10, 2)
    values = ops.function_values(sampler, [1.0] * 10, TRIALS, seed=23)
    standard_error = values.std() / math.sqrt(TRIALS)
    assert abs(values.mean() - 10 * sampler.variable_mean) < 5 * standard_error


def test_function_values_are_reproducible():
    sampler = DependentSampler.m_dependent(20, 2)
    a = ops.function_values(sampler, [1.0] * 20, 25_000, seed=11)
    b = ops.function_values(sampler, [1.0] * 20, 25_000, seed=11)
    c = ops.function_values(sampler, [1.0] * 20, 25_000, seed=12)
    assert a.shape == (25_000,)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)


def test_function_values_prefix_is_stable_across_trial_counts():
    sampler = DependentSampler.edge_generator(GraphFamilies.path(5))
    short = ops.function_values(sampler, [1.0] * 5, 10_000, seed=13)
    long = ops.function_values(sampler, [1.0] * 5, 30_000, seed=13)
    np.testing.assert_array_equal(short, long[:10_000])


@pytest.mark.slow
def test_function_values_do_not_depend_on_worker_count():
    sampler = DependentSampler.m_dependent(30, 3)
    inline = ops.function_values(sampler, [1.0] * 30, 40_000, seed=14, workers=1)
    pooled = ops.function_values(sampler, [1.0] * 30, 40_000, seed=14, workers=2)
    np.testing.assert_array_equal(inline, pooled)


def test_constant_sampler():
    sampler = DependentSampler.edge_generator(GraphFamilies.path(3), constant=0.25)
    assert sampler.variable_mean == 0.25
    np.testing.assert_array_equal(ops.function_values(sampler, [1.0] * 3, 1000, seed=0), 0.75)
    with pytest.raises(ValueError, match="constant"):
        ops.empirical_correlation(sampler, 0, 1, 1000, seed=0)


def test_single_draw_helpers():
    assert ops.sample_edge_generator(GraphFamilies.path(4), seed=1).shape == (4,)
    assert ops.sample_m_dependent(6, 2, seed=1).shape == (6,)
    draw = ops.sample_poisson_regions([(0.0, 0.0, 1.0, 1.0)], intensity=10.0, cap=5, seed=1)
    assert draw.shape == (1,)
    np.testing.assert_array_equal(
        ops.sample_m_dependent(6, 2, seed=1), ops.sample_m_dependent(6, 2, seed=1)
    )


def test_sampler_validation():
    with pytest.raises(ValueError, match="requires m"):
        DependentSampler(kind="m_dependent_average", graph=GraphFamilies.path(3))
    with pytest.raises(ValueError, match="regions"):
        DependentSampler(kind="poisson_regions", graph=Graph(n=2))
    with pytest.raises(ValueError, match="cap"):
        DependentSampler.poisson_regions([(0.0, 0.0, 1.0, 1.0)], cap=0)
    with pytest.raises(ValueError, match="intensity"):
        DependentSampler.poisson_regions([(0.0, 0.0, 1.0, 1.0)], intensity=0.0)
    with pytest.raises(ValueError, match=r"\[0, 1\]"):
        DependentSampler.edge_generator(GraphFamilies.path(2), constant=1.5)
    with pytest.raises(ValueError, match="n >= 1"):
        DependentSampler.m_dependent(0, 1)
    with pytest.raises(ValueError, match="Rectangle 0"):
        DependentSampler.poisson_regions([(0.0, 0.0, 1.5, 1.0)])
    with pytest.raises(ValueError, match="at least one variable"):
        DependentSampler.poisson_regions([])
    with pytest.raises(ValueError, match="at least one variable"):
        DependentSampler.edge_generator(Graph(n=0))


def test_indices_and_lengths_checked():
    sampler = DependentSampler.m_dependent(4, 1)
    with pytest.raises(ValueError, match="outside"):
        ops.empirical_correlation(sampler, 0, 4, 1000, seed=0)
    with pytest.raises(ValueError, match="entries"):
        ops.function_values(sampler, [1.0] * 3, 1000, seed=0)
    with pytest.raises(ValueError, match="seed"):
        ops.function_values(sampler, [1.0] * 4, 1000, seed=-1)
