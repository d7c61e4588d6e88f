"""McDiarmid-type tail bounds for graph-dependent variables.

Every bound here has the shape exp(-2t^2 / D) for a family-specific
denominator D, so each family is a `*_denominator` function plus a thin
`*_tail` wrapper.
"""

import math
from collections.abc import Sequence
from fractions import Fraction
from typing import Literal

from pydantic import BaseModel, ConfigDict, field_validator

from .base_operations import BaseOperations
from .forest_complexity import ForestApproximation, ForestComplexityOperations
from .graph_core import Graph, GraphOperations
from .validation_utils import ValidationUtils

Family = Literal["mcdiarmid", "janson", "tree", "forest", "general", "approximation"]

FAMILIES: tuple[Family, ...] = ("mcdiarmid", "janson", "tree", "forest", "general", "approximation")


class LipschitzVector(BaseModel):
    """Per-coordinate Lipschitz coefficients of a function of the variables."""

    model_config = ConfigDict(frozen=True)

    c: tuple[float, ...]

    @field_validator("c")
    @classmethod
    def _non_negative(cls, c: tuple[float, ...]) -> tuple[float, ...]:
        for i, ci in enumerate(c):
            ValidationUtils.validate_non_negative(ci, f"c[{i}]")
        return c

    @classmethod
    def uniform(cls, n: int, value: float = 1.0) -> "LipschitzVector":
        return cls(c=(float(value),) * n)

    @property
    def n(self) -> int:
        return len(self.c)

    @property
    def l2_squared(self) -> float:
        return math.fsum(ci * ci for ci in self.c)

    @property
    def l_inf(self) -> float:
        return max(self.c, default=0.0)

    @property
    def c_min(self) -> float:
        return min(self.c, default=0.0)

    def check_length(self, g: Graph) -> None:
        if self.n != g.n:
            raise ValueError(
                f"Lipschitz vector has {self.n} entries but the graph has {g.n} vertices"
            )


class TailBound(BaseModel):
    """exp(-2t^2 / denominator), reported clamped to 1 with the raw value kept."""

    model_config = ConfigDict(frozen=True)

    t: float
    probability: float
    raw: float
    denominator: float
    family: Family


class TailBoundOperations(BaseOperations):
    """Closed-form tail bounds and their inversions."""

    @staticmethod
    def evaluate(family: Family, denominator: float, t: float) -> TailBound:
        """Evaluate exp(-2t^2 / D) at t >= 0.

        The exponent is formed first and exponentiated once.
        """
        ValidationUtils.validate_positive(denominator, f"{family} denominator")
        t = ValidationUtils.validate_non_negative(t, "threshold t")
        raw = math.exp(-2.0 * t * t / denominator)
        return TailBound(
            t=t, probability=min(raw, 1.0), raw=raw, denominator=denominator, family=family
        )

    @staticmethod
    def tail_curve(family: Family, denominator: float, t_grid: Sequence[float]) -> list[TailBound]:
        """One family evaluated over a threshold grid."""
        return [TailBoundOperations.evaluate(family, denominator, t) for t in t_grid]

    @staticmethod
    def tightest(bounds: Sequence[TailBound]) -> TailBound:
        """The bound with the smallest denominator (tightest at every t)."""
        if not bounds:
            raise ValueError("No bounds to choose from")
        return min(bounds, key=lambda bound: bound.denominator)

    # Denominators

    @staticmethod
    def mcdiarmid_denominator(c: LipschitzVector) -> float:
        if c.l2_squared <= 0:
            raise ValueError("Lipschitz vector must have a non-zero entry")
        return c.l2_squared

    @staticmethod
    def janson_denominator(c: LipschitzVector, chi_star: Fraction | float) -> float:
        if chi_star < 1:
            raise ValueError(f"Fractional chromatic number must be at least 1 (got {chi_star})")
        return float(chi_star) * TailBoundOperations.mcdiarmid_denominator(c)

    @staticmethod
    def forest_denominator(g: Graph, c: LipschitzVector) -> float:
        """Sum of (c_i + c_j)^2 over edges plus each tree's squared minimum coefficient.

        Raises:
            ValueError: If g is not a forest
        """
        c.check_length(g)
        if not GraphOperations.is_forest(g):
            raise ValueError("Forest bound requires an acyclic dependency graph")
        edge_terms = math.fsum((c.c[i] + c.c[j]) ** 2 for i, j in g.edges)
        tree_terms = math.fsum(
            min(c.c[v] for v in tree) ** 2 for tree in GraphOperations.connected_components(g)
        )
        return edge_terms + tree_terms

    @staticmethod
    def tree_denominator(g: Graph, c: LipschitzVector) -> float:
        if not GraphOperations.is_tree(g):
            raise ValueError("Tree bound requires the dependency graph to be a tree")
        return TailBoundOperations.forest_denominator(g, c)

    @staticmethod
    def general_denominator(lambda_g: int, c_inf: float) -> float:
        if lambda_g < 1:
            raise ValueError(f"Forest complexity must be at least 1 (got {lambda_g})")
        ValidationUtils.validate_positive(c_inf, "c_inf")
        return lambda_g * c_inf * c_inf

    @staticmethod
    def approximation_denominator(g: Graph, fa: ForestApproximation, c: LipschitzVector) -> float:
        """Forest denominator of the merged variables, one per block of fa.

        Each block carries the sum of its members' coefficients.
        """
        c.check_length(g)
        ForestComplexityOperations.validate_approximation(g, fa)
        merged = LipschitzVector(
            c=tuple(math.fsum(c.c[v] for v in block) for block in fa.partition.blocks)
        )
        return TailBoundOperations.forest_denominator(fa.forest, merged)

    # Tails

    @staticmethod
    def mcdiarmid_tail(c: LipschitzVector, t: float) -> TailBound:
        """exp(-2t^2 / ||c||_2^2) for independent variables."""
        ValidationUtils.validate_threshold(t)
        return TailBoundOperations.evaluate("mcdiarmid", TailBoundOperations.mcdiarmid_denominator(c), t)

    @staticmethod
    def janson_tail(c: LipschitzVector, chi_star: Fraction | float, t: float) -> TailBound:
        """exp(-2t^2 / (chi* ||c||_2^2)); valid for sums of variables ranging
        over intervals of length c_i."""
        ValidationUtils.validate_threshold(t)
        return TailBoundOperations.evaluate(
            "janson", TailBoundOperations.janson_denominator(c, chi_star), t
        )

    @staticmethod
    def tree_tail(g: Graph, c: LipschitzVector, t: float) -> TailBound:
        ValidationUtils.validate_threshold(t)
        return TailBoundOperations.evaluate("tree", TailBoundOperations.tree_denominator(g, c), t)

    @staticmethod
    def forest_tail(g: Graph, c: LipschitzVector, t: float) -> TailBound:
        ValidationUtils.validate_threshold(t)
        return TailBoundOperations.evaluate("forest", TailBoundOperations.forest_denominator(g, c), t)

    @staticmethod
    def general_tail(lambda_g: int, c_inf: float, t: float) -> TailBound:
        """exp(-2t^2 / (Lambda ||c||_inf^2)) for any dependency graph."""
        ValidationUtils.validate_threshold(t)
        return TailBoundOperations.evaluate(
            "general", TailBoundOperations.general_denominator(lambda_g, c_inf), t
        )

    @staticmethod
    def approximation_tail(
        g: Graph, fa: ForestApproximation, c: LipschitzVector, t: float
    ) -> TailBound:
        ValidationUtils.validate_threshold(t)
        return TailBoundOperations.evaluate(
            "approximation", TailBoundOperations.approximation_denominator(g, fa, c), t
        )

    @staticmethod
    def invert_tail(denominator: float, delta: float) -> float:
        """The t at which exp(-2t^2 / D) equals delta: sqrt(D ln(1/delta) / 2)."""
        ValidationUtils.validate_positive(denominator, "denominator")
        ValidationUtils.validate_probability(delta)
        return math.sqrt(denominator * math.log(1.0 / delta) / 2.0)
