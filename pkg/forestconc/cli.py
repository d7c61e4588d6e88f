import logging
from collections.abc import Callable
from pathlib import Path
from typing import Annotated, Optional, TypeVar

import typer
from pydantic import BaseModel, Field, field_validator
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from forestconc.operations import GapReport, TailEstimationOperations, ValidationUtils
from forestconc.operations.stability_lab import DEFAULT_NOISE, DEFAULT_TEST_TRIALS
from forestconc.operations.tail_estimation import DEFAULT_GRID_POINTS
from forestconc.tools import ForestConcTools
from forestconc.tools.forest_tools import DEFAULT_CORRUPT_FACTOR, SimulationReport

T = TypeVar("T")

# Exit codes
EXIT_FAILED = 1
EXIT_USAGE = 2

app = typer.Typer(
    name="forestconc",
    help="Forest complexity, concentration bounds and their Monte Carlo validation.",
    no_args_is_help=True,
    add_completion=False,
)
console = Console()
err_console = Console(stderr=True)
logger = logging.getLogger("forestconc")
forest_tools = ForestConcTools()


class RunConfig(BaseModel):
    """Validated parameters of one CLI invocation."""

    command: str
    seed: int = Field(default=0, ge=0)
    workers: int = Field(default=1, ge=1)
    out: Optional[Path] = None
    graph: Optional[Path] = None
    family: Optional[str] = None
    n: Optional[int] = Field(default=None, ge=0)
    m: Optional[int] = Field(default=None, ge=0)
    lipschitz: str = "uniform:1"
    t_grid: Optional[list[float]] = None
    bound: Optional[str] = None
    trials: Optional[int] = None
    confidence: float = ValidationUtils.DEFAULT_CONFIDENCE
    delta: Optional[float] = None

    @field_validator("t_grid", mode="before")
    @classmethod
    def _parse_grid(cls, value: object) -> object:
        if isinstance(value, str):
            return ValidationUtils.parse_t_grid(value)
        return value

    @field_validator("trials")
    @classmethod
    def _check_trials(cls, value: Optional[int]) -> Optional[int]:
        return value if value is None else ValidationUtils.validate_trials(value)

    @field_validator("confidence")
    @classmethod
    def _check_confidence(cls, value: float) -> float:
        return ValidationUtils.validate_probability(value, "confidence")

    @field_validator("delta")
    @classmethod
    def _check_delta(cls, value: Optional[float]) -> Optional[float]:
        return value if value is None else ValidationUtils.validate_probability(value)


def _configure_logging(verbose: bool) -> None:
    handler = RichHandler(console=err_console, show_path=False, show_time=False)
    logger.handlers[:] = [handler]
    logger.setLevel(logging.DEBUG if verbose else logging.WARNING)
    logger.propagate = False


def _run(body: Callable[[], T]) -> T:
    """Run a command body, mapping errors to exit codes."""
    try:
        return body()
    except ValueError as e:
        err_console.print(f"[bold red]Error:[/bold red] {e}")
        raise typer.Exit(EXIT_USAGE)
    except RuntimeError as e:
        err_console.print(f"[bold red]Computation failed:[/bold red] {e}")
        raise typer.Exit(EXIT_FAILED)


def _probability(value: Optional[float]) -> str:
    return "-" if value is None else f"{value:.6g}"


@app.callback()
def _root(
    verbose: Annotated[bool, typer.Option("--verbose", "-v", help="Log progress at DEBUG level")] = False,
) -> None:
    _configure_logging(verbose)


GraphOption = Annotated[Optional[Path], typer.Option("--graph", help="Graph JSON file")]
FamilyOption = Annotated[
    Optional[str], typer.Option("--family", help="Built-in graph family (path, cycle, grid, mdep, star, tree, ...)")
]
NOption = Annotated[Optional[int], typer.Option("--n", help="Vertex count, leaf count (star) or region count (poisson)")]
MOption = Annotated[Optional[int], typer.Option("--m", help="Grid side or dependence range")]
SeedOption = Annotated[int, typer.Option("--seed", help="Root seed for all randomness")]
OutOption = Annotated[Optional[Path], typer.Option("--out", help="Write the machine-readable result (CSV, or JSON for complexity and genbound)")]
WorkersOption = Annotated[
    int, typer.Option("--workers", envvar="FORESTCONC_WORKERS", help="Worker processes; results do not depend on it")
]


@app.command()
def complexity(
    graph: GraphOption = None,
    family: FamilyOption = None,
    n: NOption = None,
    m: MOption = None,
    seed: SeedOption = 0,
    max_n: Annotated[int, typer.Option("--max-n", help="Vertex budget of the exact oracle")] = 12,
    out: OutOption = None,
) -> None:
    """Forest complexity: exact when the graph fits the oracle, else the best construction."""

    def body() -> None:
        config = RunConfig(command="complexity", graph=graph, family=family, n=n, m=m, seed=seed, out=out)
        g = forest_tools.resolve_graph(config.graph, config.family, config.n, config.m, config.seed)
        report = forest_tools.complexity_report(g, max_n)

        kind = "exact" if report.best.exact else "upper bound"
        console.print(f"Lambda(G) = [bold]{report.best.value}[/bold] ({kind}, {report.best.method})")
        console.print(f"Witness partition: {[list(b) for b in report.best.witness.partition.blocks]}")
        table = Table(title=f"Constructions on n={g.n}, |E|={len(g.edges)}")
        table.add_column("method")
        table.add_column("lambda", justify="right")
        for result in report.constructions:
            table.add_row(result.method, str(result.value))
        console.print(table)
        if config.out is not None:
            forest_tools.write_json(config.out, forest_tools.complexity_payload(report))

    _run(body)


@app.command()
def bound(
    graph: GraphOption = None,
    family: FamilyOption = None,
    n: NOption = None,
    m: MOption = None,
    seed: SeedOption = 0,
    lipschitz: Annotated[str, typer.Option("--lipschitz", help="'uniform:x' or comma-separated c_i")] = "uniform:1",
    t: Annotated[str, typer.Option("--t", help="Comma-separated thresholds")] = "1",
    bound_family: Annotated[
        Optional[str], typer.Option("--bound", help="Evaluate only this family (error if it does not apply)")
    ] = None,
    out: OutOption = None,
) -> None:
    """Evaluate tail bounds over a threshold grid."""

    def body() -> None:
        config = RunConfig(
            command="bound", graph=graph, family=family, n=n, m=m, seed=seed,
            lipschitz=lipschitz, t_grid=t, bound=bound_family, out=out,
        )
        g = forest_tools.resolve_graph(config.graph, config.family, config.n, config.m, config.seed)
        c = ValidationUtils.parse_lipschitz_spec(config.lipschitz, g.n)
        table = forest_tools.bound_table(g, c, config.t_grid or [], config.bound)

        view = Table(title="Tail bounds P(f - Ef >= t)")
        view.add_column("t", justify="right")
        families = list(table.curves)
        for name in families:
            view.add_column(name, justify="right")
        for k, value in enumerate(table.t_grid):
            view.add_row(
                f"{value:g}",
                *(_probability(curve[k].probability if curve else None) for curve in table.curves.values()),
            )
        console.print(view)
        if config.out is not None:
            forest_tools.write_bound_csv(config.out, table)

    _run(body)


def _print_simulation(report: SimulationReport) -> None:
    estimate = report.estimate
    view = Table(title=f"{estimate.trials} trials, tightest bound: {report.validation.family}")
    for column in ("t", "frequency", "ci_upper", "bound", "verdict"):
        view.add_column(column, justify="right")
    for check in report.validation.checks:
        view.add_row(
            f"{check.t:.4g}",
            f"{check.frequency:.4g}",
            f"{check.ci_upper:.4g}",
            f"{check.bound:.4g}",
            "pass" if check.passed else "[red]FAIL[/red]",
        )
    console.print(view)
    console.print("PASS" if report.validation.passed else "FAIL")


@app.command()
def simulate(
    sampler: Annotated[str, typer.Option("--sampler", help="edgegen | mdep | poisson")] = "edgegen",
    graph: GraphOption = None,
    family: FamilyOption = None,
    n: NOption = None,
    m: MOption = None,
    seed: SeedOption = 0,
    trials: Annotated[int, typer.Option("--trials")] = 100_000,
    t: Annotated[Optional[str], typer.Option("--t", help="Thresholds; default spans 0.5..3.3 pilot sd")] = None,
    points: Annotated[int, typer.Option("--points", help="Default grid size")] = DEFAULT_GRID_POINTS,
    lipschitz: Annotated[str, typer.Option("--lipschitz")] = "uniform:1",
    confidence: Annotated[float, typer.Option("--confidence")] = ValidationUtils.DEFAULT_CONFIDENCE,
    intensity: Annotated[float, typer.Option("--intensity", help="Poisson intensity")] = 60.0,
    cap: Annotated[int, typer.Option("--cap", help="Poisson count cap")] = 5,
    corrupt_bound: Annotated[
        bool, typer.Option("--corrupt-bound", help="Negative control: validate a deliberately optimistic bound")
    ] = False,
    corrupt_factor: Annotated[
        float,
        typer.Option(
            "--corrupt-factor",
            help="Shrink factor for the corrupted bound's denominator; 0.02 by default since 0.5 never fails on small graphs",
        ),
    ] = DEFAULT_CORRUPT_FACTOR,
    workers: WorkersOption = 1,
    out: OutOption = None,
) -> None:
    """Estimate tail frequencies and check the tightest applicable bound against them."""

    def body() -> SimulationReport:
        config = RunConfig(
            command="simulate", graph=graph, family=family, n=n, m=m, seed=seed, trials=trials,
            t_grid=t, lipschitz=lipschitz, confidence=confidence, workers=workers, out=out,
        )
        g = None
        if sampler == "edgegen":
            g = forest_tools.resolve_graph(config.graph, config.family, config.n, config.m, config.seed)
        dependent = forest_tools.build_sampler(
            sampler, g, config.n, config.m, config.seed, intensity, cap
        )
        c = ValidationUtils.parse_lipschitz_spec(config.lipschitz, dependent.n)
        grid = config.t_grid
        if grid is None:
            grid = TailEstimationOperations.default_t_grid(dependent, c, config.trials, config.seed, points)
        report = forest_tools.simulate(
            dependent, c, config.trials, config.seed, grid, config.confidence, config.workers,
            corrupt_factor if corrupt_bound else None,
        )
        _print_simulation(report)
        if config.out is not None:
            forest_tools.write_bound_csv(config.out, report.table, report.estimate)
        return report

    report = _run(body)
    if not report.validation.passed:
        raise typer.Exit(EXIT_FAILED)


@app.command()
def genbound(
    n: Annotated[int, typer.Option("--n", help="Sample size")] = 1000,
    beta_constant: Annotated[float, typer.Option("--beta-constant", help="B in beta_i = B / i")] = 1.0,
    loss_bound: Annotated[float, typer.Option("--loss-bound", help="M")] = 1.0,
    delta: Annotated[float, typer.Option("--delta")] = 0.05,
    empirical_risk: Annotated[float, typer.Option("--empirical-risk")] = 0.0,
    lambda_g: Annotated[Optional[int], typer.Option("--lambda", help="Forest complexity; default n")] = None,
    delta_cap: Annotated[int, typer.Option("--delta-cap", help="Maximum dependency degree")] = 0,
    m: Annotated[Optional[int], typer.Option("--m", help="Use the m-dependent form with this m")] = None,
    out: OutOption = None,
) -> None:
    """Stability generalization bound, term by term."""

    def body() -> None:
        config = RunConfig(command="genbound", n=n, m=m, delta=delta, out=out)
        terms = forest_tools.generalization(
            n, beta_constant, loss_bound, empirical_risk, config.delta, lambda_g, delta_cap, config.m
        )
        view = Table(title="Generalization bound" + (f" (m-dependent, m={m})" if m is not None else ""))
        view.add_column("term")
        view.add_column("value", justify="right")
        view.add_row("empirical risk", f"{terms.empirical_risk:.10g}")
        view.add_row("expected gap", f"{terms.expected_gap:.10g}")
        view.add_row("deviation", f"{terms.deviation:.10g}")
        view.add_row("total", f"{terms.total:.10g}")
        console.print(view)
        if config.out is not None:
            forest_tools.write_json(config.out, terms.model_dump() | {"total": terms.total})

    _run(body)


@app.command()
def gap(
    n: Annotated[int, typer.Option("--n")] = 500,
    q: Annotated[int, typer.Option("--q", help="Half-width of the price window")] = 2,
    regularization: Annotated[float, typer.Option("--regularization")] = 1.0,
    delta: Annotated[float, typer.Option("--delta")] = 0.05,
    repetitions: Annotated[int, typer.Option("--repetitions")] = 200,
    noise: Annotated[float, typer.Option("--noise")] = DEFAULT_NOISE,
    test_trials: Annotated[int, typer.Option("--test-trials")] = DEFAULT_TEST_TRIALS,
    seed: SeedOption = 0,
    workers: WorkersOption = 1,
    out: OutOption = None,
) -> None:
    """Measured generalization gaps of the ridge learner against the m-dependent bound."""

    def body() -> GapReport:
        config = RunConfig(command="gap", n=n, seed=seed, delta=delta, workers=workers, out=out)
        report = forest_tools.gap_experiment(
            n, q, regularization, config.delta, repetitions, config.seed, noise, test_trials, config.workers
        )
        gaps = [record.gap for record in report.records]
        console.print(
            f"{len(report.records)} repetitions, n={n}, q={q} (m={2 * q}): "
            f"max gap {max(gaps):.4g}, bound {report.records[0].bound:.4g}"
        )
        console.print(
            f"Pass fraction {report.pass_fraction:.3f} (required {report.required_fraction:.3f}): "
            + ("PASS" if report.passed else "FAIL")
        )
        if config.out is not None:
            forest_tools.write_gap_csv(config.out, report)
        return report

    report = _run(body)
    if not report.passed:
        raise typer.Exit(EXIT_FAILED)


@app.command("write-graph")
def write_graph(
    path: Annotated[Path, typer.Argument(help="Destination JSON file")],
    family: Annotated[str, typer.Option("--family")] = "path",
    n: NOption = None,
    m: MOption = None,
    seed: SeedOption = 0,
) -> None:
    """Write a built-in graph family as a graph JSON file."""

    def body() -> None:
        g = forest_tools.resolve_graph(None, family, n, m, seed)
        forest_tools.write_graph(g, path)
        console.print(f"Wrote {family} graph with n={g.n}, |E|={len(g.edges)} to {path}")

    _run(body)


def main() -> None:
    """Main entry point for the forestconc CLI."""
    app()


if __name__ == "__main__":
    main()
