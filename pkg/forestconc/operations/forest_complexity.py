"""Forest approximations, their lambda values and the forest complexity Lambda(G)."""

import logging
from collections.abc import Iterable

from networkx.utils import UnionFind
from pydantic import BaseModel, ConfigDict, model_validator

from .base_operations import BaseOperations
from .graph_core import Graph, GraphOperations, VertexPartition
from .graph_families import GraphFamilies
from .validation_utils import ValidationUtils

logger = logging.getLogger(__name__)

# Default vertex budget of the exact oracle (Bell(12) ~ 4.2M partitions before pruning).
ORACLE_MAX_N = 12


class ForestApproximation(BaseModel):
    """A vertex map phi (as its preimage partition) plus a forest F on the blocks."""

    model_config = ConfigDict(frozen=True)

    partition: VertexPartition
    forest: Graph

    @model_validator(mode="after")
    def _check_forest(self) -> "ForestApproximation":
        if self.forest.n != len(self.partition.blocks):
            raise ValueError(
                f"Forest has {self.forest.n} vertices but the partition has {len(self.partition.blocks)} blocks"
            )
        if not GraphOperations.is_forest(self.forest):
            raise ValueError("F must be a forest (it contains a cycle)")
        return self

    @classmethod
    def from_partition(cls, g: Graph, partition: VertexPartition) -> "ForestApproximation":
        """Approximation whose forest is the quotient of g by `partition`.

        Raises:
            ValueError: If the quotient contains a cycle
        """
        return cls(partition=partition, forest=GraphOperations.quotient(g, partition))

    @classmethod
    def from_labels(cls, g: Graph, labels: list[int]) -> "ForestApproximation":
        return cls.from_partition(g, VertexPartition.from_labels(labels))


class ComplexityResult(BaseModel):
    """A lambda value certified by its witness approximation."""

    model_config = ConfigDict(frozen=True)

    value: int
    witness: ForestApproximation
    exact: bool
    method: str


class ForestComplexityOperations(BaseOperations):
    """Evaluate, bound and compute the forest complexity of a graph."""

    @staticmethod
    def validate_approximation(g: Graph, fa: ForestApproximation) -> None:
        """Check that every edge of g maps to one block or to an edge of F.

        Raises:
            ValueError: If the partition does not cover g, or an original edge
                joins two distinct blocks that are not adjacent in F
        """
        if fa.partition.n != g.n:
            raise ValueError(
                f"Approximation covers {fa.partition.n} vertices but the graph has {g.n}"
            )
        owner = fa.partition.block_of
        forest_edges = set(fa.forest.edges)
        for u, v in g.edges:
            a, b = owner[u], owner[v]
            if a != b and (min(a, b), max(a, b)) not in forest_edges:
                raise ValueError(
                    f"Invalid forest approximation: edge {[u, v]} joins blocks "
                    f"{list(fa.partition.blocks[a])} and {list(fa.partition.blocks[b])}, "
                    "which are not adjacent in F"
                )

    @staticmethod
    def lambda_value(g: Graph, fa: ForestApproximation) -> int:
        """Sum of (|phi^-1(u)| + |phi^-1(v)|)^2 over F edges plus, per tree of F,
        the squared smallest preimage size.

        Raises:
            ValueError: If fa is not a valid approximation of g
        """
        ForestComplexityOperations.validate_approximation(g, fa)
        sizes = fa.partition.sizes
        edge_terms = sum((sizes[a] + sizes[b]) ** 2 for a, b in fa.forest.edges)
        tree_terms = sum(
            min(sizes[u] for u in tree) ** 2
            for tree in GraphOperations.connected_components(fa.forest)
        )
        return edge_terms + tree_terms

    @staticmethod
    def _result(g: Graph, fa: ForestApproximation, exact: bool, method: str) -> ComplexityResult:
        value = ForestComplexityOperations.lambda_value(g, fa)
        return ComplexityResult(value=value, witness=fa, exact=exact, method=method)

    @staticmethod
    def identity_approximation(g: Graph) -> ForestApproximation:
        """All-singleton partition with F = g.

        Raises:
            ValueError: If g is not a forest
        """
        if not GraphOperations.is_forest(g):
            raise ValueError("Identity approximation requires a forest (graph has a cycle)")
        return ForestApproximation(partition=VertexPartition.singletons(g.n), forest=g)

    @staticmethod
    def identity_upper_bound(g: Graph) -> ComplexityResult:
        """4 per edge plus 1 per tree; 4n - 3 for a tree."""
        fa = ForestComplexityOperations.identity_approximation(g)
        return ForestComplexityOperations._result(g, fa, exact=False, method="identity")

    @staticmethod
    def cycle_upper_bound(n: int) -> ComplexityResult:
        """Fold C_n onto a path by pairing k with n - k.

        Gives 8n - 13 for even n and 8n - 14 for odd n.
        """
        if n < 3:
            raise ValueError(f"Cycle construction needs n >= 3 (got {n})")
        g = GraphFamilies.cycle(n)
        labels = [min(v, n - v) for v in range(n)]
        fa = ForestApproximation.from_labels(g, labels)
        return ForestComplexityOperations._result(g, fa, exact=False, method="cycle_fold")

    @staticmethod
    def grid_upper_bound(m: int) -> ComplexityResult:
        """Merge the anti-diagonals of the m x m grid into a path.

        Gives (2m(2m+1)(2m-1) - 3) / 3.
        """
        if m < 2:
            raise ValueError(f"Grid construction needs m >= 2 (got {m})")
        g = GraphFamilies.grid(m)
        labels = [row + col for row in range(m) for col in range(m)]
        fa = ForestApproximation.from_labels(g, labels)
        return ForestComplexityOperations._result(g, fa, exact=False, method="grid_antidiagonal")

    @staticmethod
    def m_dependent_upper_bound(n: int, m: int) -> ComplexityResult:
        """Map consecutive blocks of m indices to the vertices of a path.

        For n a multiple of m this is (n/m - 1) * 4m^2 + m^2 <= 4mn.
        """
        if n < 1 or m < 1:
            raise ValueError(f"m-dependent construction needs n >= 1 and m >= 1 (got n={n}, m={m})")
        g = GraphFamilies.m_dependent_chain(n, m)
        fa = ForestApproximation.from_labels(g, [i // m for i in range(n)])
        return ForestComplexityOperations._result(g, fa, exact=False, method="m_dependent_blocks")

    @staticmethod
    def diameter_heuristic(g: Graph) -> ComplexityResult:
        """Merge BFS layers from a peripheral vertex of every component.

        Each component becomes a path as long as its BFS depth. Edges only join
        equal or consecutive layers, so the quotient is a forest.
        """
        labels = [0] * g.n
        next_label = 0
        for component in GraphOperations.connected_components(g):
            source = GraphOperations.peripheral_vertex(g, component)
            for layer in GraphOperations.bfs_layers(g, source):
                for v in layer:
                    labels[v] = next_label
                next_label += 1
        fa = ForestApproximation.from_labels(g, labels)
        return ForestComplexityOperations._result(g, fa, exact=False, method="diameter_layers")

    @staticmethod
    def merge_all_upper_bound(g: Graph) -> ComplexityResult:
        """Single block; lambda = n^2. Always valid."""
        fa = ForestApproximation.from_labels(g, [0] * g.n)
        return ForestComplexityOperations._result(g, fa, exact=False, method="merge_all")

    @staticmethod
    def _join_trees(blocks: int, edges: Iterable[tuple[int, int]]) -> UnionFind | None:
        """Union the endpoints of every edge; None as soon as an edge closes a cycle."""
        trees = UnionFind(range(blocks))
        for a, b in edges:
            if trees[a] == trees[b]:
                return None
            trees.union(a, b)
        return trees

    @staticmethod
    def exact_forest_complexity(g: Graph, max_n: int = ORACLE_MAX_N) -> ComplexityResult:
        """Exact Lambda(G) by branch and bound over set partitions.

        Vertices are assigned blocks in restricted-growth order. F is fixed to
        the quotient: an F edge absent from the quotient joins two trees and
        always increases lambda. A prefix is pruned when its partial quotient
        already has a cycle, or when its lower bound reaches the best value so
        far. The bound is the current edge terms, the squared size of every
        block without quotient edges, one per unassigned vertex, and one for a
        tree that has edges. Ties keep the first optimum.

        Args:
            g: The graph
            max_n: Vertex budget

        Raises:
            ValueError: If g has more than max_n vertices
        """
        ValidationUtils.validate_budget(g.n, max_n, "the exact forest complexity oracle")
        n = g.n
        if n == 0:
            return ForestComplexityOperations._result(
                g, ForestApproximation.from_labels(g, []), exact=True, method="exact"
            )

        lower = [sorted(u for u in g.adjacency[v] if u < v) for v in range(n)]
        labels = [0] * n
        sizes: list[int] = []
        multiplicity: dict[tuple[int, int], int] = {}

        seed = ForestComplexityOperations.diameter_heuristic(g)
        best_value = seed.value + 1
        best_labels: list[int] | None = None
        visited = 0

        def edge_terms() -> int:
            return sum((sizes[a] + sizes[b]) ** 2 for a, b in multiplicity)

        def lower_bound(unassigned: int) -> int:
            touched = {block for edge in multiplicity for block in edge}
            isolated = sum(s * s for block, s in enumerate(sizes) if block not in touched)
            return edge_terms() + isolated + unassigned + (1 if multiplicity else 0)

        def tree_terms(trees: UnionFind) -> int:
            smallest: dict[int, int] = {}
            for block, size in enumerate(sizes):
                root = trees[block]
                smallest[root] = min(size, smallest.get(root, size))
            return sum(s * s for s in smallest.values())

        def assign(v: int) -> None:
            nonlocal best_value, best_labels, visited
            if v == n:
                trees = ForestComplexityOperations._join_trees(len(sizes), multiplicity)
                if trees is None:
                    return
                value = edge_terms() + tree_terms(trees)
                if value < best_value:
                    best_value, best_labels = value, list(labels)
                return
            blocks = len(sizes)
            for b in range(blocks + 1):
                visited += 1
                if b == blocks:
                    sizes.append(0)
                labels[v] = b
                sizes[b] += 1
                touched = []
                for u in lower[v]:
                    c = labels[u]
                    if c != b:
                        key = (min(b, c), max(b, c))
                        multiplicity[key] = multiplicity.get(key, 0) + 1
                        touched.append(key)
                if (
                    ForestComplexityOperations._join_trees(len(sizes), multiplicity) is not None
                    and lower_bound(n - v - 1) < best_value
                ):
                    assign(v + 1)
                for key in touched:
                    multiplicity[key] -= 1
                    if multiplicity[key] == 0:
                        del multiplicity[key]
                sizes[b] -= 1
                if b == blocks:
                    sizes.pop()

        assign(0)
        logger.debug("Exact oracle on n=%d visited %d partial partitions", n, visited)
        if best_labels is None:
            raise RuntimeError(
                f"Exact oracle found no partition at or below the heuristic value {seed.value}"
            )
        fa = ForestApproximation.from_labels(g, best_labels)
        return ForestComplexityOperations._result(g, fa, exact=True, method="exact")

    @staticmethod
    def applicable_constructions(g: Graph) -> list[ComplexityResult]:
        """Every heuristic and closed-form construction that applies to g."""
        results = [
            ForestComplexityOperations.diameter_heuristic(g),
            ForestComplexityOperations.merge_all_upper_bound(g),
        ]
        if GraphOperations.is_forest(g):
            results.append(ForestComplexityOperations.identity_upper_bound(g))
        if g.n >= 3 and g == GraphFamilies.cycle(g.n):
            results.append(ForestComplexityOperations.cycle_upper_bound(g.n))
        side = round(g.n**0.5)
        if side >= 2 and side * side == g.n and g == GraphFamilies.grid(side):
            results.append(ForestComplexityOperations.grid_upper_bound(side))
        if g.edges:
            reach = max(v - u for u, v in g.edges)
            if g == GraphFamilies.m_dependent_chain(g.n, reach):
                results.append(ForestComplexityOperations.m_dependent_upper_bound(g.n, reach))
        return results

    @staticmethod
    def best_upper_bound(g: Graph, max_n: int = ORACLE_MAX_N) -> ComplexityResult:
        """Exact Lambda when g fits the oracle budget, else the best construction."""
        if g.n <= max_n:
            return ForestComplexityOperations.exact_forest_complexity(g, max_n)
        candidates = ForestComplexityOperations.applicable_constructions(g)
        return min(candidates, key=lambda result: result.value)
