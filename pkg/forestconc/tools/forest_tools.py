import csv
import json
import logging
from collections.abc import Sequence
from fractions import Fraction
from pathlib import Path

from pydantic import BaseModel, ConfigDict, ValidationError, field_validator

from forestconc.operations import (
    ComplexityResult,
    DependentSampler,
    ForestComplexityOperations,
    FractionalChromaticOperations,
    FractionalColoring,
    GapReport,
    GeneralizationBound,
    Graph,
    GraphFamilies,
    GraphOperations,
    LipschitzVector,
    StabilityBoundOperations,
    StabilityLabOperations,
    StabilitySchedule,
    TailBound,
    TailBoundOperations,
    TailEstimate,
    TailEstimationOperations,
    ValidationReport,
    ValidationUtils,
)
from forestconc.operations.chromatic import CHROMATIC_MAX_N
from forestconc.operations.forest_complexity import ORACLE_MAX_N
from forestconc.operations.samplers import DEFAULT_INTENSITY, POISSON_CAP
from forestconc.operations.tail_bounds import FAMILIES, Family

logger = logging.getLogger(__name__)

SAMPLERS = ("edgegen", "mdep", "poisson")

# Corrupted denominators are shrunk by this factor for the negative control.
DEFAULT_CORRUPT_FACTOR = 0.02


class GraphFile(BaseModel):
    """On-disk graph: {"n": int, "edges": [[u, v], ...], "labels": [...]}."""

    model_config = ConfigDict(frozen=True)

    n: int
    edges: list[tuple[int, int]]
    labels: list[str] | None = None

    @field_validator("labels")
    @classmethod
    def _unique_labels(cls, labels: list[str] | None) -> list[str] | None:
        if labels is not None and len(set(labels)) != len(labels):
            raise ValueError("Vertex labels must be unique")
        return labels

    def to_graph(self) -> Graph:
        if self.labels is not None and len(self.labels) != self.n:
            raise ValueError(f"Expected {self.n} labels, got {len(self.labels)}")
        return Graph(n=self.n, edges=self.edges)


class ComplexityReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    graph: Graph
    best: ComplexityResult
    constructions: tuple[ComplexityResult, ...]


class BoundTable(BaseModel):
    """One curve per family over a shared grid; None where the family does not apply."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    t_grid: tuple[float, ...]
    curves: dict[str, tuple[TailBound, ...] | None]
    complexity: ComplexityResult | None = None
    chi_star: Fraction | None = None

    def tightest_family(self) -> Family:
        available = {family: curve for family, curve in self.curves.items() if curve}
        if not available:
            raise ValueError("No bound family applies to this graph and Lipschitz vector")
        return min(available, key=lambda family: available[family][0].denominator)  # type: ignore[return-value]


class SimulationReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    estimate: TailEstimate
    table: BoundTable
    validation: ValidationReport
    corrupted: bool


class ForestConcTools:
    """Facade tying graph input, bound evaluation, simulation and reporting together."""

    # Graph input and output

    def load_graph(self, path: str | Path) -> Graph:
        """Parse a GraphFile.

        Raises:
            ValueError: If the file is unreadable, not JSON or not a valid graph
        """
        try:
            text = Path(path).read_text()
        except OSError as e:
            raise ValueError(f"Cannot read graph file '{path}': {e.strerror}")
        return self.parse_graph(text, f"graph file '{path}'")

    def parse_graph(self, text: str, source: str = "graph JSON") -> Graph:
        try:
            return GraphFile.model_validate_json(text).to_graph()
        except ValidationError as e:
            raise ValueError(f"Invalid {source}: {e}")

    def write_graph(self, g: Graph, path: str | Path) -> None:
        payload = {"n": g.n, "edges": [list(edge) for edge in g.edges]}
        Path(path).write_text(json.dumps(payload, indent=2) + "\n")

    def resolve_graph(
        self,
        graph_path: str | Path | None = None,
        family: str | None = None,
        n: int | None = None,
        m: int | None = None,
        seed: int = 0,
    ) -> Graph:
        """A graph from a file or a built-in family (exactly one of the two)."""
        if (graph_path is None) == (family is None):
            raise ValueError("Give exactly one of --graph or --family")
        if graph_path is not None:
            return self.load_graph(graph_path)
        return GraphFamilies.build(family, n=n, m=m, seed=seed)  # type: ignore[arg-type]

    # Forest complexity

    def complexity_report(self, g: Graph, max_n: int = ORACLE_MAX_N) -> ComplexityReport:
        return ComplexityReport(
            graph=g,
            best=ForestComplexityOperations.best_upper_bound(g, max_n),
            constructions=tuple(ForestComplexityOperations.applicable_constructions(g)),
        )

    def fractional_chromatic(
        self, g: Graph, max_n: int = CHROMATIC_MAX_N
    ) -> tuple[Fraction, FractionalColoring]:
        return FractionalChromaticOperations.fractional_chromatic_number(g, max_n)

    # Tail bounds

    def bound_table(
        self,
        g: Graph,
        c: Sequence[float],
        t_grid: Sequence[float],
        family: str | None = None,
        max_n: int = ORACLE_MAX_N,
    ) -> BoundTable:
        """Evaluate every applicable family, or only `family`, over `t_grid`.

        Raises:
            ValueError: If the requested family does not apply to g
        """
        if family is not None and family not in FAMILIES:
            raise ValueError(f"Unknown bound family '{family}'. Choose one of: {', '.join(FAMILIES)}")
        grid = ValidationUtils.validate_t_grid(t_grid)
        lipschitz = LipschitzVector(c=tuple(ValidationUtils.validate_lipschitz(c, g.n)))
        wanted = FAMILIES if family is None else (family,)

        complexity = None
        if {"general", "approximation"} & set(wanted):
            complexity = ForestComplexityOperations.best_upper_bound(g, max_n)
        chi_star = FractionalChromaticOperations.chromatic_value(g) if "janson" in wanted else None

        curves: dict[str, tuple[TailBound, ...] | None] = {}
        for name in FAMILIES:
            if name not in wanted:
                curves[name] = None
                continue
            try:
                denominator = self._denominator(name, g, lipschitz, complexity, chi_star)
            except ValueError as e:
                if family is not None:
                    raise
                logger.debug("Family %s skipped: %s", name, e)
                curves[name] = None
                continue
            curves[name] = tuple(TailBoundOperations.tail_curve(name, denominator, grid))  # type: ignore[arg-type]
        return BoundTable(t_grid=tuple(grid), curves=curves, complexity=complexity, chi_star=chi_star)

    @staticmethod
    def _denominator(
        family: str,
        g: Graph,
        c: LipschitzVector,
        complexity: ComplexityResult | None,
        chi_star: Fraction | None,
    ) -> float:
        if family == "mcdiarmid":
            if g.edges:
                raise ValueError("McDiarmid's bound requires independent variables (an edgeless graph)")
            return TailBoundOperations.mcdiarmid_denominator(c)
        if family == "janson":
            if chi_star is None:
                raise ValueError(
                    f"Fractional chromatic number unavailable for this graph beyond {CHROMATIC_MAX_N} vertices"
                )
            return TailBoundOperations.janson_denominator(c, chi_star)
        if family == "tree":
            return TailBoundOperations.tree_denominator(g, c)
        if family == "forest":
            return TailBoundOperations.forest_denominator(g, c)
        assert complexity is not None
        if family == "general":
            return TailBoundOperations.general_denominator(complexity.value, c.l_inf)
        return TailBoundOperations.approximation_denominator(g, complexity.witness, c)

    # Simulation

    def build_sampler(
        self,
        kind: str,
        g: Graph | None = None,
        n: int | None = None,
        m: int | None = None,
        seed: int = 0,
        intensity: float = DEFAULT_INTENSITY,
        cap: int = POISSON_CAP,
    ) -> DependentSampler:
        if kind == "edgegen":
            if g is None:
                raise ValueError("Sampler 'edgegen' needs a graph (--graph or --family)")
            return DependentSampler.edge_generator(g)
        if kind == "mdep":
            if n is None or m is None:
                raise ValueError("Sampler 'mdep' requires --n and --m")
            return DependentSampler.m_dependent(n, m)
        if kind == "poisson":
            if n is None:
                raise ValueError("Sampler 'poisson' requires --n (number of regions)")
            regions = GraphFamilies.overlapping_rectangles(n, seed)
            return DependentSampler.poisson_regions(regions, intensity, cap)
        raise ValueError(f"Unknown sampler '{kind}'. Choose one of: {', '.join(SAMPLERS)}")

    def simulate(
        self,
        sampler: DependentSampler,
        c: Sequence[float],
        trials: int,
        seed: int,
        t_grid: Sequence[float] | None = None,
        confidence: float = ValidationUtils.DEFAULT_CONFIDENCE,
        workers: int = 1,
        corrupt_factor: float | None = None,
    ) -> SimulationReport:
        """Estimate the tail of sum c_i X_i and validate the tightest applicable bound."""
        if t_grid is None:
            t_grid = TailEstimationOperations.default_t_grid(sampler, c, trials, seed)
        estimate = TailEstimationOperations.estimate_tail(
            sampler, c, t_grid, trials, seed, confidence, workers
        )
        table = self.bound_table(sampler.graph, c, estimate.t_grid)
        curve = list(table.curves[table.tightest_family()] or ())
        if corrupt_factor is not None:
            curve = TailEstimationOperations.corrupt_curve(curve, corrupt_factor)
        validation = TailEstimationOperations.validate_bound(estimate, curve)
        logger.info(
            "Validation of %s bound: %s", validation.family, "pass" if validation.passed else "FAIL"
        )
        return SimulationReport(
            estimate=estimate, table=table, validation=validation, corrupted=corrupt_factor is not None
        )

    # Stability

    def generalization(
        self,
        n: int,
        beta_constant: float,
        loss_bound: float,
        empirical_risk: float,
        delta: float,
        lambda_g: int | None = None,
        delta_cap: int = 0,
        m: int | None = None,
    ) -> GeneralizationBound:
        """Terms of the stability bound; the m-dependent form when m is given.

        Without m and lambda_g the sample is taken as independent (Lambda = n).
        """
        schedule = StabilitySchedule.from_closed_form(n, beta_constant, loss_bound, delta_cap)
        if m is not None:
            return StabilityBoundOperations.m_dependent_terms(schedule, m, empirical_risk, delta)
        return StabilityBoundOperations.generalization_terms(
            schedule, n if lambda_g is None else lambda_g, empirical_risk, delta
        )

    def gap_experiment(
        self,
        n: int,
        q: int,
        regularization: float,
        delta: float,
        repetitions: int,
        seed: int,
        noise: float,
        test_trials: int,
        workers: int = 1,
    ) -> GapReport:
        return StabilityLabOperations.gap_experiment(
            n, q, regularization, delta, repetitions, seed, noise, test_trials, workers
        )

    # Reports

    @staticmethod
    def format_probability(value: float | None) -> str:
        return "" if value is None else format(value, ".17g")

    def write_bound_csv(
        self, path: str | Path, table: BoundTable, estimate: TailEstimate | None = None
    ) -> None:
        header = ["t"]
        if estimate is not None:
            header += ["empirical_freq", "ci_upper"]
        header += [f"bound_{family}" for family in FAMILIES]
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            for k, t in enumerate(table.t_grid):
                row = [self.format_probability(t)]
                if estimate is not None:
                    row += [
                        self.format_probability(estimate.frequencies[k]),
                        self.format_probability(estimate.ci_upper[k]),
                    ]
                for family in FAMILIES:
                    curve = table.curves.get(family)
                    row.append(self.format_probability(curve[k].probability if curve else None))
                writer.writerow(row)

    def write_gap_csv(self, path: str | Path, report: GapReport) -> None:
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(
                ["repetition", "empirical_risk", "risk", "standard_error", "gap", "bound", "slack", "passed"]
            )
            for record in report.records:
                writer.writerow(
                    [record.repetition]
                    + [
                        self.format_probability(value)
                        for value in (
                            record.empirical_risk,
                            record.risk,
                            record.standard_error,
                            record.gap,
                            record.bound,
                            record.slack,
                        )
                    ]
                    + [int(record.passed)]
                )

    def write_json(self, path: str | Path, payload: dict) -> None:
        Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")

    def complexity_payload(self, report: ComplexityReport) -> dict:
        def describe(result: ComplexityResult) -> dict:
            return {
                "method": result.method,
                "value": result.value,
                "exact": result.exact,
                "partition": [list(block) for block in result.witness.partition.blocks],
                "forest_edges": [list(edge) for edge in result.witness.forest.edges],
            }

        return {
            "n": report.graph.n,
            "edges": len(report.graph.edges),
            "is_forest": GraphOperations.is_forest(report.graph),
            "lambda": describe(report.best),
            "constructions": [describe(result) for result in report.constructions],
        }

