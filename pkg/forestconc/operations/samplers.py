"""Random vectors in [0, 1]^n whose dependency graph is known exactly."""

import logging
from collections.abc import Sequence
from typing import Literal

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from pydantic import BaseModel, ConfigDict, model_validator

from .base_operations import BaseOperations
from .graph_core import Graph
from .graph_families import GraphFamilies
from .validation_utils import ValidationUtils

logger = logging.getLogger(__name__)

SamplerKind = Literal["edge_generator", "m_dependent_average", "poisson_regions"]

# Counts above the cap are truncated so every variable stays in [0, 1].
POISSON_CAP = 5
DEFAULT_INTENSITY = 60.0

# Stream tags, one per use of randomness.
SAMPLE_TAG = 0x5A
CORRELATION_TAG = 0xC0
SINGLE_DRAW_TAG = 0x1D

Rectangle = tuple[float, float, float, float]


class DependentSampler(BaseModel):
    """A sampler together with its certified dependency graph."""

    model_config = ConfigDict(frozen=True)

    kind: SamplerKind
    graph: Graph
    m: int | None = None
    regions: tuple[Rectangle, ...] = ()
    intensity: float = DEFAULT_INTENSITY
    cap: int = POISSON_CAP
    # Forces every variable to this value (zero-variance control).
    constant: float | None = None

    @model_validator(mode="after")
    def _check(self) -> "DependentSampler":
        if self.graph.n < 1:
            raise ValueError(f"A sampler needs at least one variable (got n={self.graph.n})")
        if self.kind == "m_dependent_average" and self.m is None:
            raise ValueError("m-dependent sampler requires m")
        if self.kind == "poisson_regions":
            if len(self.regions) != self.graph.n:
                raise ValueError(
                    f"Poisson sampler has {len(self.regions)} regions but its graph has {self.graph.n} vertices"
                )
            ValidationUtils.validate_positive(self.intensity, "intensity")
            if self.cap < 1:
                raise ValueError(f"cap must be at least 1 (got {self.cap})")
        if self.constant is not None and not 0.0 <= self.constant <= 1.0:
            raise ValueError(f"constant must lie in [0, 1] (got {self.constant})")
        return self

    @classmethod
    def edge_generator(cls, g: Graph, constant: float | None = None) -> "DependentSampler":
        return cls(kind="edge_generator", graph=g, constant=constant)

    @classmethod
    def m_dependent(cls, n: int, m: int) -> "DependentSampler":
        if n < 1 or m < 0:
            raise ValueError(f"m-dependent sampler needs n >= 1 and m >= 0 (got n={n}, m={m})")
        return cls(kind="m_dependent_average", graph=GraphFamilies.m_dependent_chain(n, m), m=m)

    @classmethod
    def poisson_regions(
        cls, regions: Sequence[Sequence[float]], intensity: float = DEFAULT_INTENSITY, cap: int = POISSON_CAP
    ) -> "DependentSampler":
        rects = tuple(ValidationUtils.validate_rectangle(r, i) for i, r in enumerate(regions))
        return cls(
            kind="poisson_regions",
            graph=GraphFamilies.rectangle_intersection(rects),
            regions=rects,
            intensity=intensity,
            cap=cap,
        )

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def variable_mean(self) -> float | None:
        """E[X_i], identical for every i, when known in closed form."""
        if self.constant is not None:
            return self.constant
        if self.kind == "poisson_regions":
            return None
        return 0.5


class SamplerOperations(BaseOperations):
    """Draw dependent vectors, singly or in vectorized chunks."""

    @staticmethod
    def draw(sampler: DependentSampler, size: int, rng: np.random.Generator) -> np.ndarray:
        """`size` independent vectors as a (size, n) array."""
        if sampler.constant is not None:
            return np.full((size, sampler.n), sampler.constant)
        if sampler.kind == "edge_generator":
            return SamplerOperations._edge_generator_chunk(sampler.graph, size, rng)
        if sampler.kind == "m_dependent_average":
            return SamplerOperations._m_dependent_chunk(sampler.n, sampler.m or 0, size, rng)
        return SamplerOperations._poisson_chunk(
            sampler.regions, sampler.intensity, sampler.cap, size, rng
        )

    @staticmethod
    def _edge_generator_chunk(g: Graph, size: int, rng: np.random.Generator) -> np.ndarray:
        # X_v averages its own generator with one generator per incident edge
        incidence = np.zeros((g.n, len(g.edges)))
        for e, (u, v) in enumerate(g.edges):
            incidence[u, e] = incidence[v, e] = 1.0
        own = rng.random((size, g.n))
        shared = rng.random((size, len(g.edges)))
        return (own + shared @ incidence.T) / (1.0 + incidence.sum(axis=1))

    @staticmethod
    def _m_dependent_chunk(n: int, m: int, size: int, rng: np.random.Generator) -> np.ndarray:
        eps = rng.random((size, n + m))
        return sliding_window_view(eps, m + 1, axis=1).mean(axis=2)

    @staticmethod
    def _poisson_chunk(
        regions: Sequence[Rectangle], intensity: float, cap: int, size: int, rng: np.random.Generator
    ) -> np.ndarray:
        """Capped point counts of a Poisson process restricted to the regions' bounding box.

        Rectangles are closed: points on a boundary count for every region
        containing it.
        """
        rects = np.asarray(regions, dtype=float)
        x0, y0 = rects[:, 0].min(), rects[:, 1].min()
        x1, y1 = rects[:, 2].max(), rects[:, 3].max()
        counts = rng.poisson(intensity * (x1 - x0) * (y1 - y0), size=size)
        owner = np.repeat(np.arange(size), counts)
        px = rng.uniform(x0, x1, size=owner.size)
        py = rng.uniform(y0, y1, size=owner.size)
        values = np.empty((size, len(rects)))
        for r, (a0, b0, a1, b1) in enumerate(rects):
            inside = (px >= a0) & (px <= a1) & (py >= b0) & (py <= b1)
            hits = np.bincount(owner[inside], minlength=size)
            values[:, r] = np.minimum(hits, cap) / cap
        return values

    @staticmethod
    def sample_edge_generator(g: Graph, seed: int) -> np.ndarray:
        """One vector from the edge-generator construction on g."""
        rng = SamplerOperations.stream(seed, SINGLE_DRAW_TAG)
        return SamplerOperations._edge_generator_chunk(g, 1, rng)[0]

    @staticmethod
    def sample_m_dependent(n: int, m: int, seed: int) -> np.ndarray:
        """One m-dependent vector: sliding means of n + m uniforms."""
        if n < 1 or m < 0:
            raise ValueError(f"m-dependent sampler needs n >= 1 and m >= 0 (got n={n}, m={m})")
        rng = SamplerOperations.stream(seed, SINGLE_DRAW_TAG)
        return SamplerOperations._m_dependent_chunk(n, m, 1, rng)[0]

    @staticmethod
    def sample_poisson_regions(
        regions: Sequence[Sequence[float]], intensity: float, cap: int, seed: int
    ) -> np.ndarray:
        sampler = DependentSampler.poisson_regions(regions, intensity, cap)
        rng = SamplerOperations.stream(seed, SINGLE_DRAW_TAG)
        return SamplerOperations.draw(sampler, 1, rng)[0]

    @staticmethod
    def function_values(
        sampler: DependentSampler,
        c: Sequence[float],
        trials: int,
        seed: int,
        tag: int = SAMPLE_TAG,
        workers: int = 1,
    ) -> np.ndarray:
        """f(X) = sum_i c_i X_i for `trials` independent vectors.

        Chunk k always uses stream (seed, tag, k), so the values are the same
        for every worker count.
        """
        coefficients = tuple(ValidationUtils.validate_lipschitz(c, sampler.n))
        tasks = [
            (sampler, coefficients, seed, tag, index, size)
            for index, size in enumerate(SamplerOperations.chunk_sizes(trials))
        ]
        chunks = SamplerOperations.map_ordered(_chunk_values, tasks, workers)
        logger.debug("Simulated %d trials in %d chunks (tag %#x)", trials, len(tasks), tag)
        return SamplerOperations.flatten(chunks)

    @staticmethod
    def empirical_correlation(
        sampler: DependentSampler, i: int, j: int, trials: int, seed: int
    ) -> float:
        """Pearson correlation of X_i and X_j over `trials` draws."""
        for v in (i, j):
            if not 0 <= v < sampler.n:
                raise ValueError(f"Variable index {v} is outside [0, {sampler.n})")
        columns = [
            SamplerOperations.draw(sampler, size, SamplerOperations.stream(seed, CORRELATION_TAG, k))[
                :, [i, j]
            ]
            for k, size in enumerate(SamplerOperations.chunk_sizes(trials))
        ]
        pairs = np.concatenate(columns)
        if np.ptp(pairs[:, 0]) == 0 or np.ptp(pairs[:, 1]) == 0:
            raise ValueError(f"Variable {i} or {j} is constant; correlation is undefined")
        return float(np.corrcoef(pairs[:, 0], pairs[:, 1])[0, 1])


def _chunk_values(task: tuple[DependentSampler, tuple[float, ...], int, int, int, int]) -> np.ndarray:
    sampler, coefficients, seed, tag, index, size = task
    rng = SamplerOperations.stream(seed, tag, index)
    return SamplerOperations.draw(sampler, size, rng) @ np.asarray(coefficients)
