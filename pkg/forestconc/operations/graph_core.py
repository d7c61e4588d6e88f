"""Undirected simple graphs on dense integer vertices and their structural queries."""

from collections.abc import Iterable, Sequence
from functools import cached_property

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .base_operations import BaseOperations


class Graph(BaseModel):
    """Undirected simple graph on vertices 0..n-1 with a canonical edge list.

    Instances are immutable; derived views (adjacency, networkx graph) are
    computed once on first use.
    """

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=0)
    edges: tuple[tuple[int, int], ...] = ()

    @field_validator("edges", mode="before")
    @classmethod
    def _canonicalize(cls, edges: Iterable[Sequence[int]]) -> tuple[tuple[int, int], ...]:
        seen: set[tuple[int, int]] = set()
        for edge in edges:
            if len(edge) != 2:
                raise ValueError(f"Edge {list(edge)} must have exactly two endpoints")
            u, v = int(edge[0]), int(edge[1])
            if u == v:
                raise ValueError(f"Self-loop on vertex {u} is not allowed")
            pair = (min(u, v), max(u, v))
            if pair in seen:
                raise ValueError(f"Duplicate edge {list(pair)}")
            seen.add(pair)
        return tuple(sorted(seen))

    @model_validator(mode="after")
    def _check_range(self) -> "Graph":
        for u, v in self.edges:
            if u < 0 or v >= self.n:
                raise ValueError(
                    f"Edge {[u, v]} has an endpoint outside the vertex range [0, {self.n})"
                )
        return self

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        neighbors: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            neighbors[u].add(v)
            neighbors[v].add(u)
        return tuple(frozenset(s) for s in neighbors)

    @cached_property
    def nx_graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges)
        return graph


class VertexPartition(BaseModel):
    """Disjoint non-empty blocks covering 0..N-1, ordered by their minimum vertex."""

    model_config = ConfigDict(frozen=True)

    blocks: tuple[tuple[int, ...], ...]

    @field_validator("blocks", mode="before")
    @classmethod
    def _canonicalize(cls, blocks: Iterable[Iterable[int]]) -> tuple[tuple[int, ...], ...]:
        canonical = []
        for block in blocks:
            members = tuple(sorted(int(v) for v in block))
            if not members:
                raise ValueError("Partition blocks must be non-empty")
            canonical.append(members)
        return tuple(sorted(canonical, key=lambda b: b[0]))

    @model_validator(mode="after")
    def _check_cover(self) -> "VertexPartition":
        flat = [v for block in self.blocks for v in block]
        if len(flat) != len(set(flat)):
            raise ValueError("Partition blocks must be pairwise disjoint")
        if sorted(flat) != list(range(len(flat))):
            raise ValueError("Partition blocks must cover exactly the vertices 0..n-1")
        return self

    @property
    def n(self) -> int:
        return sum(len(block) for block in self.blocks)

    @cached_property
    def block_of(self) -> tuple[int, ...]:
        owner = [0] * self.n
        for index, block in enumerate(self.blocks):
            for v in block:
                owner[v] = index
        return tuple(owner)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(block) for block in self.blocks)

    @classmethod
    def singletons(cls, n: int) -> "VertexPartition":
        return cls(blocks=[[v] for v in range(n)])

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "VertexPartition":
        """Build a partition from a block label per vertex."""
        groups: dict[int, list[int]] = {}
        for v, label in enumerate(labels):
            groups.setdefault(label, []).append(v)
        return cls(blocks=list(groups.values()))


class GraphOperations(BaseOperations):
    """Structural queries on dependency graphs."""

    @staticmethod
    def is_forest(g: Graph) -> bool:
        """Return True iff g has no cycle."""
        if g.n == 0:
            return True
        return nx.is_forest(g.nx_graph)

    @staticmethod
    def is_tree(g: Graph) -> bool:
        return g.n > 0 and len(g.edges) == g.n - 1 and GraphOperations.is_forest(g)

    @staticmethod
    def connected_components(g: Graph) -> list[set[int]]:
        """Maximal connected vertex sets, ordered by their smallest vertex."""
        return sorted(
            (set(component) for component in nx.connected_components(g.nx_graph)),
            key=min,
        )

    @staticmethod
    def degrees(g: Graph) -> list[int]:
        return [len(neighbors) for neighbors in g.adjacency]

    @staticmethod
    def max_degree(g: Graph) -> int:
        """Maximum vertex degree; 0 for edgeless graphs."""
        return max(GraphOperations.degrees(g), default=0)

    @staticmethod
    def quotient(g: Graph, p: VertexPartition) -> Graph:
        """Merge each block into one vertex, dropping self-loops and multi-edges.

        Args:
            g: The original graph
            p: A partition of g's vertices

        Returns:
            Graph on len(p.blocks) vertices, block i being p.blocks[i]

        Raises:
            ValueError: If p does not partition g's vertex set
        """
        if p.n != g.n:
            raise ValueError(
                f"Partition covers {p.n} vertices but the graph has {g.n}"
            )
        owner = p.block_of
        crossing = {
            (min(owner[u], owner[v]), max(owner[u], owner[v]))
            for u, v in g.edges
            if owner[u] != owner[v]
        }
        return Graph(n=len(p.blocks), edges=sorted(crossing))

    @staticmethod
    def bfs_layers(g: Graph, source: int) -> list[set[int]]:
        """Vertices grouped by shortest-path distance from `source`.

        Only the component of `source` is covered.

        Raises:
            ValueError: If source is not a vertex of g
        """
        if not 0 <= source < g.n:
            raise ValueError(f"Source vertex {source} is outside the vertex range [0, {g.n})")
        return [set(layer) for layer in nx.bfs_layers(g.nx_graph, source)]

    @staticmethod
    def peripheral_vertex(g: Graph, component: set[int]) -> int:
        """Farthest vertex from the smallest member of a component.

        Ties go to the smallest vertex of the last BFS layer.
        """
        start = min(component)
        return min(GraphOperations.bfs_layers(g, start)[-1])
