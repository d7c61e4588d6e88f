"""Exact fractional chromatic number via a rational simplex on the covering LP."""

import logging
from fractions import Fraction

import networkx as nx
from pydantic import BaseModel, ConfigDict

from .base_operations import BaseOperations
from .graph_core import Graph
from .validation_utils import ValidationUtils

logger = logging.getLogger(__name__)

# Default vertex budget for maximal independent set enumeration.
CHROMATIC_MAX_N = 14


class FractionalColoring(BaseModel):
    """Independent sets with non-negative rational weights covering every vertex."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    independent_sets: tuple[tuple[int, ...], ...]
    weights: tuple[Fraction, ...]

    @property
    def total_weight(self) -> Fraction:
        return sum(self.weights, Fraction(0))


class FractionalChromaticOperations(BaseOperations):
    """Fractional chromatic number chi*(G) for small graphs."""

    @staticmethod
    def maximal_independent_sets(g: Graph) -> list[tuple[int, ...]]:
        """All maximal independent sets, each sorted, in lexicographic order.

        Bron-Kerbosch with pivoting on the complement graph: cliques of the
        complement are the independent sets of g.
        """
        everyone = frozenset(range(g.n))
        non_neighbors = [everyone - g.adjacency[v] - {v} for v in range(g.n)]
        found: list[tuple[int, ...]] = []

        def expand(chosen: frozenset[int], candidates: frozenset[int], excluded: frozenset[int]) -> None:
            if not candidates and not excluded:
                found.append(tuple(sorted(chosen)))
                return
            pivot = max(candidates | excluded, key=lambda u: len(candidates & non_neighbors[u]))
            for v in sorted(candidates - non_neighbors[pivot]):
                expand(chosen | {v}, candidates & non_neighbors[v], excluded & non_neighbors[v])
                candidates = candidates - {v}
                excluded = excluded | {v}

        if g.n:
            expand(frozenset(), everyone, frozenset())
        return sorted(found)

    @staticmethod
    def _solve_packing_lp(sets: list[tuple[int, ...]], n: int) -> tuple[Fraction, list[Fraction]]:
        """Solve max sum(y) s.t. sum_{v in S} y_v <= 1 for every S, y >= 0.

        This is the dual of the covering LP. The origin is feasible, so a single
        phase of the tableau simplex with Bland's rule suffices. The optimal
        covering weights are read off the reduced costs of the slack columns.

        Returns:
            Optimal value and the covering weight of each set
        """
        rows = len(sets)
        columns = n + rows
        # tableau rows: [coefficients..., rhs]
        tableau = []
        for r, members in enumerate(sets):
            row = [Fraction(0)] * (columns + 1)
            for v in members:
                row[v] = Fraction(1)
            row[n + r] = Fraction(1)
            row[columns] = Fraction(1)
            tableau.append(row)
        # objective row holds reduced costs c_j - z_j, maximizing
        objective = [Fraction(1)] * n + [Fraction(0)] * rows + [Fraction(0)]
        basis = [n + r for r in range(rows)]
        pivots = 0

        while True:
            entering = next((j for j in range(columns) if objective[j] > 0), None)
            if entering is None:
                break
            leaving = None
            best_ratio: Fraction | None = None
            for r in range(rows):
                coefficient = tableau[r][entering]
                if coefficient > 0:
                    ratio = tableau[r][columns] / coefficient
                    if best_ratio is None or ratio < best_ratio or (
                        ratio == best_ratio and basis[r] < basis[leaving]
                    ):
                        best_ratio, leaving = ratio, r
            if leaving is None:
                raise RuntimeError("Packing LP is unbounded; the independent sets do not cover every vertex")

            pivot_row = tableau[leaving]
            pivot = pivot_row[entering]
            tableau[leaving] = pivot_row = [value / pivot for value in pivot_row]
            for r in range(rows):
                factor = tableau[r][entering]
                if r != leaving and factor:
                    tableau[r] = [a - factor * b for a, b in zip(tableau[r], pivot_row)]
            factor = objective[entering]
            objective = [a - factor * b for a, b in zip(objective, pivot_row)]
            basis[leaving] = entering
            pivots += 1

        logger.debug("Packing LP solved after %d pivots", pivots)
        value = -objective[columns]
        weights = [-objective[n + r] for r in range(rows)]
        return value, weights

    @staticmethod
    def fractional_chromatic_number(
        g: Graph, max_n: int = CHROMATIC_MAX_N
    ) -> tuple[Fraction, FractionalColoring]:
        """Exact chi*(G) with a certifying fractional coloring.

        Args:
            g: The graph
            max_n: Vertex budget

        Returns:
            The optimum as a Fraction and a coloring of that total weight

        Raises:
            ValueError: If g has more than max_n vertices
        """
        ValidationUtils.validate_budget(g.n, max_n, "the fractional chromatic number")
        if g.n == 0:
            return Fraction(0), FractionalColoring(independent_sets=(), weights=())

        sets = FractionalChromaticOperations.maximal_independent_sets(g)
        value, weights = FractionalChromaticOperations._solve_packing_lp(sets, g.n)
        support = [(s, w) for s, w in zip(sets, weights) if w > 0]
        coloring = FractionalColoring(
            independent_sets=tuple(s for s, _ in support),
            weights=tuple(w for _, w in support),
        )
        FractionalChromaticOperations.verify_coloring(g, coloring, value)
        return value, coloring

    @staticmethod
    def chromatic_value(g: Graph, max_n: int = CHROMATIC_MAX_N) -> Fraction | None:
        """chi*(G) when it can be had exactly, else None.

        Edgeless graphs give 1 and bipartite graphs with an edge give 2 at any
        size; other graphs go through the LP within the vertex budget.
        """
        if g.n == 0:
            return None
        if not g.edges:
            return Fraction(1)
        if nx.is_bipartite(g.nx_graph):
            return Fraction(2)
        if g.n > max_n:
            return None
        value, _ = FractionalChromaticOperations.fractional_chromatic_number(g, max_n)
        return value

    @staticmethod
    def verify_coloring(g: Graph, coloring: FractionalColoring, value: Fraction) -> None:
        """Check independence, coverage and total weight of a coloring.

        Raises:
            RuntimeError: If any certificate condition fails
        """
        cover = [Fraction(0)] * g.n
        for members, weight in zip(coloring.independent_sets, coloring.weights):
            if weight < 0:
                raise RuntimeError(f"Negative weight {weight} on set {list(members)}")
            for i, u in enumerate(members):
                if any(v in g.adjacency[u] for v in members[i + 1 :]):
                    raise RuntimeError(f"Set {list(members)} is not independent")
                cover[u] += weight
        uncovered = [v for v in range(g.n) if cover[v] < 1]
        if uncovered:
            raise RuntimeError(f"Vertices {uncovered} are covered with total weight below 1")
        if coloring.total_weight != value:
            raise RuntimeError(
                f"Coloring weight {coloring.total_weight} differs from the LP optimum {value}"
            )
