"""
Graph, bound and simulation operations for forest complexity analysis.
"""

from .base_operations import BaseOperations
from .chromatic import FractionalChromaticOperations, FractionalColoring
from .forest_complexity import (
    ComplexityResult,
    ForestApproximation,
    ForestComplexityOperations,
)
from .graph_core import Graph, GraphOperations, VertexPartition
from .graph_families import GraphFamilies
from .samplers import DependentSampler, SamplerOperations
from .stability_bounds import (
    GeneralizationBound,
    StabilityBoundOperations,
    StabilitySchedule,
)
from .stability_lab import (
    GapReport,
    RegressionSample,
    StabilityLabOperations,
    StableLearner,
)
from .tail_bounds import LipschitzVector, TailBound, TailBoundOperations
from .tail_estimation import TailEstimate, TailEstimationOperations, ValidationReport
from .validation_utils import ValidationUtils

__all__ = [
    "BaseOperations",
    "Graph",
    "VertexPartition",
    "GraphOperations",
    "GraphFamilies",
    "ForestApproximation",
    "ComplexityResult",
    "ForestComplexityOperations",
    "FractionalColoring",
    "FractionalChromaticOperations",
    "LipschitzVector",
    "TailBound",
    "TailBoundOperations",
    "StabilitySchedule",
    "GeneralizationBound",
    "StabilityBoundOperations",
    "DependentSampler",
    "SamplerOperations",
    "TailEstimate",
    "ValidationReport",
    "TailEstimationOperations",
    "RegressionSample",
    "StableLearner",
    "GapReport",
    "StabilityLabOperations",
    "ValidationUtils",
]
