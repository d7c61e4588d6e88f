"""
forestconc

Forest complexity of dependency graphs, McDiarmid-type concentration bounds
for graph-dependent variables, and their Monte Carlo and stability checks.
"""

from .operations import (
    BaseOperations,
    ForestComplexityOperations,
    FractionalChromaticOperations,
    Graph,
    GraphFamilies,
    GraphOperations,
    SamplerOperations,
    StabilityBoundOperations,
    StabilityLabOperations,
    TailBoundOperations,
    TailEstimationOperations,
    ValidationUtils,
)
from .tools.forest_tools import ForestConcTools

__version__ = "0.1.0"

__all__ = [
    "ForestConcTools",
    "BaseOperations",
    "Graph",
    "GraphOperations",
    "GraphFamilies",
    "ForestComplexityOperations",
    "FractionalChromaticOperations",
    "TailBoundOperations",
    "StabilityBoundOperations",
    "SamplerOperations",
    "TailEstimationOperations",
    "StabilityLabOperations",
    "ValidationUtils",
]
