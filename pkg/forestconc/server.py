from mcp.server.fastmcp import Context, FastMCP
from pydantic import Field

from forestconc.operations import BaseOperations, GraphFamilies, ValidationUtils
from forestconc.operations.graph_core import Graph
from forestconc.tools import ForestConcTools

# Initialize FastMCP server
mcp = FastMCP(name="forestconc")

# Initialize tools
forest_tools = ForestConcTools()


def _graph(graph: str | None, family: str | None, n: int | None, m: int | None, seed: int) -> Graph:
    if graph:
        return forest_tools.parse_graph(graph)
    if family is None:
        raise ValueError("Give either a graph JSON document or a built-in family")
    return GraphFamilies.build(family, n=n, m=m, seed=seed)


GRAPH_FIELD = Field(
    default=None,
    description='Graph as JSON, e.g. \'{"n": 3, "edges": [[0, 1], [1, 2]]}\'. Overrides family.',
)
FAMILY_FIELD = Field(
    default=None,
    description="Built-in family: edgeless, complete, path, star, cycle, grid, mdep, tree",
)
N_FIELD = Field(default=None, description="Vertex count (leaf count for star)")
M_FIELD = Field(default=None, description="Grid side (grid) or dependence range (mdep)")
SEED_FIELD = Field(default=0, description="Seed for random families and simulations")


@mcp.tool()
async def forest_complexity(
    ctx: Context,
    graph: str | None = GRAPH_FIELD,
    family: str | None = FAMILY_FIELD,
    n: int | None = N_FIELD,
    m: int | None = M_FIELD,
    seed: int = SEED_FIELD,
) -> str:
    """Compute the forest complexity Lambda(G) of a dependency graph.

    Graphs with at most 12 vertices get the exact value from a branch and
    bound over vertex partitions; larger graphs get the best applicable
    construction (BFS layers, cycle folding, grid anti-diagonals,
    m-dependent blocks), flagged as an upper bound.
    """
    try:
        g = _graph(graph, family, n, m, seed)
        report = await BaseOperations.run_blocking(forest_tools.complexity_report, g)

        kind = "exact" if report.best.exact else "upper bound"
        result = f"Lambda(G) = {report.best.value} ({kind}, {report.best.method})\n"
        result += f"Vertices: {g.n}, edges: {len(g.edges)}\n"
        result += f"Witness partition: {[list(b) for b in report.best.witness.partition.blocks]}\n"
        result += "Constructions:\n"
        for construction in report.constructions:
            result += f"  {construction.method}: {construction.value}\n"
        return result
    except ValueError as e:
        error_msg = f"Invalid input: {str(e)}"
        await ctx.error(error_msg)
        raise ValueError(error_msg)
    except (RuntimeError, TimeoutError) as e:
        await ctx.error(str(e))
        raise
    except Exception as e:
        await ctx.error(f"Error computing forest complexity: {str(e)}")
        raise


@mcp.tool()
async def fractional_chromatic_number(
    ctx: Context,
    graph: str | None = GRAPH_FIELD,
    family: str | None = FAMILY_FIELD,
    n: int | None = N_FIELD,
    m: int | None = M_FIELD,
    seed: int = SEED_FIELD,
) -> str:
    """Exact fractional chromatic number chi*(G) with a certifying coloring (up to 14 vertices)."""
    try:
        g = _graph(graph, family, n, m, seed)
        value, coloring = await BaseOperations.run_blocking(forest_tools.fractional_chromatic, g)

        result = f"chi*(G) = {value}\n"
        for members, weight in zip(coloring.independent_sets, coloring.weights):
            result += f"  {list(members)}: {weight}\n"
        return result
    except ValueError as e:
        error_msg = f"Invalid input: {str(e)}"
        await ctx.error(error_msg)
        raise ValueError(error_msg)
    except Exception as e:
        await ctx.error(f"Error computing fractional chromatic number: {str(e)}")
        raise


@mcp.tool()
async def tail_bounds(
    ctx: Context,
    t_grid: str = Field(..., description="Comma-separated thresholds, e.g. '1,2,3'"),
    lipschitz: str = Field(
        default="uniform:1", description="'uniform:x' or comma-separated coefficients c_i"
    ),
    bound: str | None = Field(
        default=None,
        description="Only this family: mcdiarmid, janson, tree, forest, general, approximation",
    ),
    graph: str | None = GRAPH_FIELD,
    family: str | None = FAMILY_FIELD,
    n: int | None = N_FIELD,
    m: int | None = M_FIELD,
    seed: int = SEED_FIELD,
) -> str:
    """Evaluate upper bounds on P(f(X) - E f(X) >= t) for a c-Lipschitz f of graph-dependent X.

    Every family that applies to the graph is reported; inapplicable ones
    are marked '-'. Naming a single family raises an error when it does not
    apply (e.g. the tree bound on a cyclic graph).
    """
    try:
        g = _graph(graph, family, n, m, seed)
        grid = ValidationUtils.parse_t_grid(t_grid)
        c = ValidationUtils.parse_lipschitz_spec(lipschitz, g.n)
        table = await BaseOperations.run_blocking(forest_tools.bound_table, g, c, grid, bound)

        result = "t," + ",".join(table.curves) + "\n"
        for k, t in enumerate(table.t_grid):
            cells = [
                f"{curve[k].probability:.6g}" if curve else "-" for curve in table.curves.values()
            ]
            result += f"{t:g}," + ",".join(cells) + "\n"
        if table.complexity is not None:
            result += f"Lambda used: {table.complexity.value} ({table.complexity.method})\n"
        return result
    except ValueError as e:
        error_msg = f"Invalid input: {str(e)}"
        await ctx.error(error_msg)
        raise ValueError(error_msg)
    except Exception as e:
        await ctx.error(f"Error evaluating tail bounds: {str(e)}")
        raise


@mcp.tool()
async def generalization_bound(
    ctx: Context,
    n: int = Field(..., description="Training sample size"),
    beta_constant: float = Field(..., description="B in the stability schedule beta_i = B / i"),
    loss_bound: float = Field(default=1.0, description="Loss bound M"),
    empirical_risk: float = Field(default=0.0, description="Training risk of the learned hypothesis"),
    delta: float = Field(default=0.05, description="Failure probability in (0, 1)"),
    lambda_g: int | None = Field(default=None, description="Forest complexity; defaults to n"),
    delta_cap: int = Field(default=0, description="Maximum dependency degree"),
    m: int | None = Field(default=None, description="Use the m-dependent form with this m"),
) -> str:
    """Risk bound for a uniformly stable learner trained on graph-dependent data, term by term."""
    try:
        terms = forest_tools.generalization(
            n, beta_constant, loss_bound, empirical_risk, delta, lambda_g, delta_cap, m
        )
        result = f"Empirical risk: {terms.empirical_risk:.10g}\n"
        result += f"Expected gap:   {terms.expected_gap:.10g}\n"
        result += f"Deviation:      {terms.deviation:.10g}\n"
        result += f"Total:          {terms.total:.10g} (with probability >= {1 - delta:g})\n"
        return result
    except ValueError as e:
        error_msg = f"Invalid input: {str(e)}"
        await ctx.error(error_msg)
        raise ValueError(error_msg)
    except Exception as e:
        await ctx.error(f"Error computing generalization bound: {str(e)}")
        raise


@mcp.tool()
async def simulate_tail(
    ctx: Context,
    sampler: str = Field(default="edgegen", description="edgegen, mdep or poisson"),
    trials: int = Field(default=100_000, description="Monte Carlo trials (at least 1000)"),
    t_grid: str | None = Field(
        default=None, description="Comma-separated thresholds; default spans 0.5..3.3 pilot sd"
    ),
    graph: str | None = GRAPH_FIELD,
    family: str | None = FAMILY_FIELD,
    n: int | None = N_FIELD,
    m: int | None = M_FIELD,
    seed: int = SEED_FIELD,
) -> str:
    """Estimate tail frequencies of sum_i X_i and check the tightest applicable bound.

    Reports per threshold the empirical frequency, its 99% Clopper-Pearson
    upper bound and the bound value; the run passes when every upper
    confidence bound lies below the bound.
    """
    try:
        g = _graph(graph, family, n, m, seed) if sampler == "edgegen" else None
        dependent = forest_tools.build_sampler(sampler, g, n, m, seed)
        c = [1.0] * dependent.n
        grid = ValidationUtils.parse_t_grid(t_grid) if t_grid else None
        await ctx.info(f"Simulating {trials} trials of the {sampler} sampler on {dependent.n} variables")
        report = await BaseOperations.run_blocking(
            forest_tools.simulate, dependent, c, trials, seed, grid
        )

        result = f"Tightest bound: {report.validation.family}\n"
        result += "t,frequency,ci_upper,bound,verdict\n"
        for check in report.validation.checks:
            verdict = "pass" if check.passed else "FAIL"
            result += f"{check.t:.4g},{check.frequency:.4g},{check.ci_upper:.4g},{check.bound:.4g},{verdict}\n"
        result += "PASS\n" if report.validation.passed else "FAIL\n"
        return result
    except ValueError as e:
        error_msg = f"Invalid input: {str(e)}"
        await ctx.error(error_msg)
        raise ValueError(error_msg)
    except (RuntimeError, TimeoutError) as e:
        await ctx.error(str(e))
        raise
    except Exception as e:
        await ctx.error(f"Error running simulation: {str(e)}")
        raise


def main():
    """Main entry point for the MCP server."""
    mcp.run()


# Run the server
if __name__ == "__main__":
    main()
