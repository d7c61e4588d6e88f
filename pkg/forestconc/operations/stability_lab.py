"""A ridge learner on m-dependent housing data and its measured generalization gap."""

import logging
import math

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from pydantic import BaseModel, ConfigDict

from .base_operations import BaseOperations
from .stability_bounds import StabilityBoundOperations, StabilitySchedule
from .validation_utils import ValidationUtils

logger = logging.getLogger(__name__)

# Targets and the clipped loss live in [0, 1]; features have norm <= 1.
TARGET_BOUND = 1.0
LOSS_BOUND = 1.0
FEATURE_BOUND = 1.0

TARGET_INTERCEPT = 0.2
TARGET_SLOPE = 0.6

DEFAULT_NOISE = 0.1
DEFAULT_TEST_TRIALS = 20_000
DEFAULT_PROBES = 100

HOUSING_TAG = 0x4005E
RISK_TAG = 0x215C
PROBE_TAG = 0x960BE


class RegressionSample(BaseModel):
    """Windowed street sample: input i is (x_i, ..., x_{i+2q}) plus a constant."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    inputs: np.ndarray
    targets: np.ndarray
    q: int
    noise: float

    @property
    def n(self) -> int:
        return len(self.targets)

    @property
    def m_dep(self) -> int:
        return 2 * self.q

    def without(self, i: int) -> "RegressionSample":
        keep = np.arange(self.n) != i
        return RegressionSample(
            inputs=self.inputs[keep], targets=self.targets[keep], q=self.q, noise=self.noise
        )


class StableLearner(BaseModel):
    """Ridge predictor w . x with loss min((y - w . x)^2, M)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    regularization: float
    weights: np.ndarray
    q: int
    noise: float
    loss_bound: float = LOSS_BOUND

    @property
    def stability_constant(self) -> float:
        """B in the declared schedule beta_i = B / i."""
        return StabilityLabOperations.stability_constant(self.regularization)

    def predict(self, inputs: np.ndarray) -> np.ndarray:
        return inputs @ self.weights

    def loss(self, inputs: np.ndarray, targets: np.ndarray) -> np.ndarray:
        return np.minimum((targets - self.predict(inputs)) ** 2, self.loss_bound)


class RiskEstimate(BaseModel):
    model_config = ConfigDict(frozen=True)

    risk: float
    standard_error: float
    trials: int


class StabilityCertificate(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    measured: float
    declared: float

    @property
    def passed(self) -> bool:
        return self.measured <= self.declared


class GapRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    repetition: int
    empirical_risk: float
    risk: float
    standard_error: float
    gap: float
    bound: float
    passed: bool

    @property
    def slack(self) -> float:
        return self.bound - self.gap


class GapReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    q: int
    delta: float
    records: tuple[GapRecord, ...]

    @property
    def pass_fraction(self) -> float:
        return sum(record.passed for record in self.records) / len(self.records)

    @property
    def required_fraction(self) -> float:
        """1 - delta less three binomial standard errors."""
        reps = len(self.records)
        return 1.0 - self.delta - 3.0 * math.sqrt(self.delta * (1.0 - self.delta) / reps)

    @property
    def passed(self) -> bool:
        return self.pass_fraction >= self.required_fraction


class StabilityLabOperations(BaseOperations):
    """Data model, learner and gap measurements."""

    @staticmethod
    def features(windows: np.ndarray) -> np.ndarray:
        """(1, window) scaled by 1/sqrt(width + 1), so entries in [0, 1] give norm <= 1."""
        ones = np.ones((windows.shape[0], 1))
        return np.hstack([ones, windows]) / math.sqrt(windows.shape[1] + 1)

    @staticmethod
    def targets(windows: np.ndarray, shocks: np.ndarray, noise: float) -> np.ndarray:
        """Clipped linear price: 0.2 + 0.6 * mean(window) + noise * (2 shock - 1)."""
        raw = TARGET_INTERCEPT + TARGET_SLOPE * windows.mean(axis=1) + noise * (2.0 * shocks - 1.0)
        return np.clip(raw, 0.0, TARGET_BOUND)

    @staticmethod
    def generate_housing_sample(
        n: int, q: int, noise: float, seed: int, replicate: int = 0
    ) -> RegressionSample:
        """A street of n houses whose prices depend on 2q + 1 consecutive location effects.

        Neighboring windows overlap, so the sample is 2q-dependent.

        Raises:
            ValueError: If n < 4q + 4 or noise is negative
        """
        if q < 0:
            raise ValueError(f"q must be non-negative (got {q})")
        if n < 4 * q + 4:
            raise ValueError(f"Housing sample needs n >= 4q + 4 = {4 * q + 4} (got {n})")
        noise = ValidationUtils.validate_non_negative(noise, "noise")
        rng = StabilityLabOperations.stream(seed, HOUSING_TAG, replicate)
        effects = rng.random(n + 2 * q)
        shocks = rng.random(n)
        windows = sliding_window_view(effects, 2 * q + 1)
        return RegressionSample(
            inputs=StabilityLabOperations.features(windows),
            targets=StabilityLabOperations.targets(windows, shocks, noise),
            q=q,
            noise=noise,
        )

    @staticmethod
    def draw_test_points(
        q: int, noise: float, size: int, rng: np.random.Generator
    ) -> tuple[np.ndarray, np.ndarray]:
        """Independent draws from the marginal distribution of one (input, target) pair."""
        windows = rng.random((size, 2 * q + 1))
        shocks = rng.random(size)
        return (
            StabilityLabOperations.features(windows),
            StabilityLabOperations.targets(windows, shocks, noise),
        )

    @staticmethod
    def train(sample: RegressionSample, regularization: float) -> StableLearner:
        """Minimize (1/n) sum (y_i - w . x_i)^2 + lambda ||w||^2.

        Raises:
            ValueError: If lambda <= 0 or every feature is zero
        """
        regularization = ValidationUtils.validate_positive(regularization, "regularization")
        x, y = sample.inputs, sample.targets
        if not np.any(x):
            raise ValueError("All features are zero; nothing to learn from")
        n, d = x.shape
        a = x.T @ x / n + regularization * np.eye(d)
        b = x.T @ y / n
        return StableLearner(
            regularization=regularization,
            weights=np.linalg.solve(a, b),
            q=sample.q,
            noise=sample.noise,
        )

    @staticmethod
    def empirical_risk(learner: StableLearner, sample: RegressionSample) -> float:
        return float(learner.loss(sample.inputs, sample.targets).mean())

    @staticmethod
    def generalization_risk(
        learner: StableLearner, test_trials: int, seed: int, replicate: int = 0
    ) -> RiskEstimate:
        """Monte Carlo risk on fresh independent points, with its standard error."""
        if test_trials < 2:
            raise ValueError(f"test_trials must be at least 2 (got {test_trials})")
        losses = StabilityLabOperations.flatten(
            learner.loss(
                *StabilityLabOperations.draw_test_points(
                    learner.q,
                    learner.noise,
                    size,
                    StabilityLabOperations.stream(seed, RISK_TAG, replicate, k),
                )
            )
            for k, size in enumerate(StabilityLabOperations.chunk_sizes(test_trials))
        )
        return RiskEstimate(
            risk=float(losses.mean()),
            standard_error=float(losses.std(ddof=1)) / math.sqrt(test_trials),
            trials=test_trials,
        )

    @staticmethod
    def stability_constant(regularization: float, feature_bound: float = FEATURE_BOUND) -> float:
        """B such that removing one of n points moves any loss by at most B / n.

        With targets in [0, 1] the weights satisfy ||w|| <= 1/sqrt(lambda), so
        residuals stay below R = 1 + kappa/sqrt(lambda). Strong convexity of
        the objective bounds the weight change by (sqrt(lambda) + R kappa) /
        (lambda n), and the loss is 2 R kappa-Lipschitz in the weights.
        """
        regularization = ValidationUtils.validate_positive(regularization, "regularization")
        root = math.sqrt(regularization)
        residual = TARGET_BOUND * (1.0 + feature_bound / root)
        return 2.0 * residual * feature_bound * (TARGET_BOUND * root + residual * feature_bound) / regularization

    @staticmethod
    def declared_schedule(regularization: float, n: int, delta_cap: int = 0) -> StabilitySchedule:
        return StabilitySchedule.from_closed_form(
            n=n,
            constant=StabilityLabOperations.stability_constant(regularization),
            loss_bound=LOSS_BOUND,
            delta_cap=delta_cap,
        )

    @staticmethod
    def certify_stability(
        sample: RegressionSample, regularization: float, probes: int = DEFAULT_PROBES, seed: int = 0
    ) -> StabilityCertificate:
        """Largest loss change over all single removals, on fresh probes and the sample itself."""
        full = StabilityLabOperations.train(sample, regularization)
        probe_x, probe_y = StabilityLabOperations.draw_test_points(
            sample.q, sample.noise, probes, StabilityLabOperations.stream(seed, PROBE_TAG)
        )
        probe_x = np.vstack([probe_x, sample.inputs])
        probe_y = np.concatenate([probe_y, sample.targets])
        reference = full.loss(probe_x, probe_y)
        measured = 0.0
        for i in range(sample.n):
            reduced = StabilityLabOperations.train(sample.without(i), regularization)
            measured = max(measured, float(np.abs(reduced.loss(probe_x, probe_y) - reference).max()))
        declared = StabilityLabOperations.declared_schedule(regularization, sample.n).beta(sample.n)
        logger.debug("Leave-one-out change %.3g against declared %.3g at n=%d", measured, declared, sample.n)
        return StabilityCertificate(n=sample.n, measured=measured, declared=declared)

    @staticmethod
    def gap_experiment(
        n: int,
        q: int,
        regularization: float,
        delta: float,
        repetitions: int,
        seed: int,
        noise: float = DEFAULT_NOISE,
        test_trials: int = DEFAULT_TEST_TRIALS,
        workers: int = 1,
    ) -> GapReport:
        """Compare measured gaps with the m-dependent bound's non-empirical terms.

        A repetition passes when gap <= bound + 3 standard errors of its risk
        estimate.
        """
        ValidationUtils.validate_probability(delta)
        if repetitions < 1:
            raise ValueError(f"repetitions must be at least 1 (got {repetitions})")
        tasks = [
            (n, q, regularization, delta, noise, test_trials, seed, r) for r in range(repetitions)
        ]
        records = StabilityLabOperations.map_ordered(_gap_repetition, tasks, workers)
        report = GapReport(n=n, q=q, delta=delta, records=tuple(records))
        logger.info(
            "Gap experiment n=%d q=%d: pass fraction %.3f over %d repetitions",
            n, q, report.pass_fraction, repetitions,
        )
        return report


def _gap_repetition(task: tuple[int, int, float, float, float, int, int, int]) -> GapRecord:
    n, q, regularization, delta, noise, test_trials, seed, r = task
    sample = StabilityLabOperations.generate_housing_sample(n, q, noise, seed, replicate=r)
    learner = StabilityLabOperations.train(sample, regularization)
    empirical = StabilityLabOperations.empirical_risk(learner, sample)
    estimate = StabilityLabOperations.generalization_risk(learner, test_trials, seed, replicate=r)
    schedule = StabilityLabOperations.declared_schedule(regularization, n)
    terms = StabilityBoundOperations.m_dependent_terms(schedule, sample.m_dep, empirical, delta)
    bound = terms.expected_gap + terms.deviation
    gap = estimate.risk - empirical
    return GapRecord(
        repetition=r,
        empirical_risk=empirical,
        risk=estimate.risk,
        standard_error=estimate.standard_error,
        gap=gap,
        bound=bound,
        passed=gap <= bound + 3.0 * estimate.standard_error,
    )
