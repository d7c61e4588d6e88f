"""Built-in graph families for the CLI, the samplers and the tests."""

from collections.abc import Sequence

from .base_operations import BaseOperations
from .graph_core import Graph
from .validation_utils import ValidationUtils


class GraphFamilies(BaseOperations):
    """Constructors for the named dependency-graph families."""

    FAMILIES = ("edgeless", "complete", "path", "star", "cycle", "grid", "mdep", "tree")

    @staticmethod
    def edgeless(n: int) -> Graph:
        return Graph(n=n)

    @staticmethod
    def complete(n: int) -> Graph:
        return Graph(n=n, edges=[(u, v) for u in range(n) for v in range(u + 1, n)])

    @staticmethod
    def path(n: int) -> Graph:
        return Graph(n=n, edges=[(v, v + 1) for v in range(n - 1)])

    @staticmethod
    def star(leaves: int) -> Graph:
        """Star with center 0 and `leaves` leaves."""
        return Graph(n=leaves + 1, edges=[(0, v) for v in range(1, leaves + 1)])

    @staticmethod
    def cycle(n: int) -> Graph:
        if n < 3:
            raise ValueError(f"A cycle needs at least 3 vertices (got {n})")
        return Graph(n=n, edges=[(v, (v + 1) % n) for v in range(n)])

    @staticmethod
    def grid(m: int, width: int | None = None) -> Graph:
        """The m x width grid (square by default), vertices in row-major order."""
        width = m if width is None else width
        edges = []
        for row in range(m):
            for col in range(width):
                v = row * width + col
                if col + 1 < width:
                    edges.append((v, v + 1))
                if row + 1 < m:
                    edges.append((v, v + width))
        return Graph(n=m * width, edges=edges)

    @staticmethod
    def m_dependent_chain(n: int, m: int) -> Graph:
        """Dependency graph of an m-dependent sequence: i ~ j iff 0 < |i - j| <= m."""
        if m < 0:
            raise ValueError(f"m must be non-negative (got {m})")
        return Graph(
            n=n,
            edges=[(i, j) for i in range(n) for j in range(i + 1, min(n, i + m + 1))],
        )

    @staticmethod
    def random_tree(n: int, seed: int) -> Graph:
        """Random recursive tree: vertex v attaches to a uniform earlier vertex."""
        rng = GraphFamilies.stream(seed, 0x7EE)
        return Graph(n=n, edges=[(int(rng.integers(0, v)), v) for v in range(1, n)])

    @staticmethod
    def rectangle_intersection(rectangles: Sequence[Sequence[float]]) -> Graph:
        """Graph with i ~ j iff closed rectangles i and j intersect.

        Rectangles are (x0, y0, x1, y1); touching boundaries count as intersecting.
        """
        rects = [
            ValidationUtils.validate_rectangle(rect, i) for i, rect in enumerate(rectangles)
        ]
        edges = []
        for i, (ax0, ay0, ax1, ay1) in enumerate(rects):
            for j in range(i + 1, len(rects)):
                bx0, by0, bx1, by1 = rects[j]
                if ax0 <= bx1 and bx0 <= ax1 and ay0 <= by1 and by0 <= ay1:
                    edges.append((i, j))
        return Graph(n=len(rects), edges=edges)

    @staticmethod
    def overlapping_rectangles(count: int, seed: int, side: float = 0.18) -> list[tuple[float, float, float, float]]:
        """Random square regions of a fixed side inside the unit square."""
        ValidationUtils.validate_positive(side, "side")
        if side >= 1.0:
            raise ValueError(f"side must be smaller than 1 (got {side})")
        rng = GraphFamilies.stream(seed, 0x2EC7)
        corners = rng.uniform(0.0, 1.0 - side, size=(count, 2))
        return [
            (float(x), float(y), float(x + side), float(y + side)) for x, y in corners
        ]

    @staticmethod
    def build(family: str, n: int | None = None, m: int | None = None, seed: int = 0) -> Graph:
        """Build a named family from CLI-style parameters.

        Args:
            family: One of FAMILIES
            n: Vertex count (path, cycle, edgeless, complete, mdep, tree) or
                leaf count (star)
            m: Grid side (grid) or dependence range (mdep)
            seed: Seed for random families

        Raises:
            ValueError: If the family is unknown or a required parameter is missing
        """
        if family not in GraphFamilies.FAMILIES:
            raise ValueError(
                f"Unknown graph family '{family}'. Choose one of: {', '.join(GraphFamilies.FAMILIES)}"
            )
        if family == "grid":
            if m is None:
                raise ValueError("Family 'grid' requires --m (grid side)")
            return GraphFamilies.grid(m)
        if n is None:
            raise ValueError(f"Family '{family}' requires --n")
        if family == "mdep":
            if m is None:
                raise ValueError("Family 'mdep' requires --m (dependence range)")
            return GraphFamilies.m_dependent_chain(n, m)
        if family == "tree":
            return GraphFamilies.random_tree(n, seed)
        return getattr(GraphFamilies, family)(n)
