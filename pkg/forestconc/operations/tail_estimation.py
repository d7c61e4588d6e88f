"""Monte Carlo tail frequencies with exact binomial upper confidence bounds."""

import logging
import math
from collections.abc import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.stats import beta, norm

from .base_operations import BaseOperations
from .samplers import DependentSampler, SamplerOperations
from .tail_bounds import TailBound, TailBoundOperations
from .validation_utils import ValidationUtils

logger = logging.getLogger(__name__)

PILOT_TAG = 0x9170
GRID_TAG = 0x641D

# Grid span in pilot standard deviations.
GRID_SPAN = (0.5, 3.3)
DEFAULT_GRID_POINTS = 6


class TailEstimate(BaseModel):
    """Empirical P(f(X) - mean >= t) over a threshold grid."""

    model_config = ConfigDict(frozen=True)

    t_grid: tuple[float, ...]
    exceedances: tuple[int, ...]
    frequencies: tuple[float, ...]
    ci_upper: tuple[float, ...]
    trials: int
    seed: int
    confidence: float
    mean_estimate: float
    # Zero when the mean is exact.
    mean_radius: float


class ThresholdCheck(BaseModel):
    model_config = ConfigDict(frozen=True)

    t: float
    frequency: float
    ci_upper: float
    bound: float
    passed: bool
    slack: float


class ValidationReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    family: str
    checks: tuple[ThresholdCheck, ...]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> list[float]:
        return [check.t for check in self.checks if not check.passed]


class TailEstimationOperations(BaseOperations):
    """Estimate tails of sum_i c_i X_i and check bounds against them."""

    @staticmethod
    def clopper_pearson_upper(exceedances: int, trials: int, confidence: float) -> float:
        """One-sided upper confidence bound for a binomial proportion."""
        if exceedances >= trials:
            return 1.0
        return float(beta.ppf(confidence, exceedances + 1, trials - exceedances))

    @staticmethod
    def estimate_tail(
        sampler: DependentSampler,
        c: Sequence[float],
        t_grid: Sequence[float],
        trials: int,
        seed: int,
        confidence: float = ValidationUtils.DEFAULT_CONFIDENCE,
        workers: int = 1,
    ) -> TailEstimate:
        """Estimate the upper tail of f(X) = sum_i c_i X_i around its mean.

        The exact mean is used when the sampler has one; otherwise a pilot run
        of the same size on a disjoint stream estimates it, and its two-sided
        normal radius at `confidence` is recorded.

        Args:
            sampler: Source of the dependent vectors
            c: Coefficients of f
            t_grid: Strictly increasing positive thresholds
            trials: Monte Carlo trial count (at least MIN_TRIALS)
            seed: Root seed; results are a pure function of it
            confidence: Level of the Clopper-Pearson bounds
            workers: Process count

        Raises:
            ValueError: On an invalid grid, trial count or coefficient vector
        """
        grid = ValidationUtils.validate_t_grid(t_grid)
        trials = ValidationUtils.validate_trials(trials)
        confidence = ValidationUtils.validate_probability(confidence, "confidence")
        coefficients = ValidationUtils.validate_lipschitz(c, sampler.n)

        if sampler.variable_mean is not None:
            mean = math.fsum(coefficients) * sampler.variable_mean
            radius = 0.0
        else:
            pilot = SamplerOperations.function_values(
                sampler, coefficients, trials, seed, PILOT_TAG, workers
            )
            mean = float(pilot.mean())
            z = float(norm.ppf(1.0 - (1.0 - confidence) / 2.0))
            radius = z * float(pilot.std(ddof=1)) / math.sqrt(trials)
            logger.info("Pilot mean %.6g with radius %.3g", mean, radius)

        values = SamplerOperations.function_values(sampler, coefficients, trials, seed, workers=workers)
        deviations = np.sort(values - mean)
        # count of deviations >= t for each t
        exceedances = [int(trials - np.searchsorted(deviations, t, side="left")) for t in grid]
        return TailEstimate(
            t_grid=tuple(grid),
            exceedances=tuple(exceedances),
            frequencies=tuple(k / trials for k in exceedances),
            ci_upper=tuple(
                TailEstimationOperations.clopper_pearson_upper(k, trials, confidence)
                for k in exceedances
            ),
            trials=trials,
            seed=seed,
            confidence=confidence,
            mean_estimate=mean,
            mean_radius=radius,
        )

    @staticmethod
    def validate_bound(estimate: TailEstimate, curve: Sequence[TailBound]) -> ValidationReport:
        """Check ci_upper <= bound at every threshold.

        With an estimated mean each bound is re-evaluated at t minus the mean
        radius, so centering error cannot cause a false violation.

        Raises:
            ValueError: If the curve's thresholds differ from the estimate's
        """
        if len(curve) != len(estimate.t_grid) or any(
            not math.isclose(bound.t, t, rel_tol=1e-12) for bound, t in zip(curve, estimate.t_grid)
        ):
            raise ValueError(
                f"Bound curve thresholds {[b.t for b in curve]} do not match the estimate grid {list(estimate.t_grid)}"
            )
        checks = []
        for bound, frequency, upper in zip(curve, estimate.frequencies, estimate.ci_upper):
            probability = bound.probability
            if estimate.mean_radius > 0:
                shifted = max(bound.t - estimate.mean_radius, 0.0)
                probability = TailBoundOperations.evaluate(
                    bound.family, bound.denominator, shifted
                ).probability
            checks.append(
                ThresholdCheck(
                    t=bound.t,
                    frequency=frequency,
                    ci_upper=upper,
                    bound=probability,
                    passed=upper <= probability,
                    slack=probability / frequency if frequency > 0 else math.inf,
                )
            )
        family = curve[0].family if curve else "none"
        return ValidationReport(family=family, checks=tuple(checks))

    @staticmethod
    def default_t_grid(
        sampler: DependentSampler,
        c: Sequence[float],
        trials: int,
        seed: int,
        points: int = DEFAULT_GRID_POINTS,
    ) -> list[float]:
        """Thresholds from 0.5 to 3.3 pilot standard deviations.

        Raises:
            ValueError: If f(X) has zero variance
        """
        if points < 1:
            raise ValueError(f"points must be at least 1 (got {points})")
        values = SamplerOperations.function_values(sampler, c, trials, seed, GRID_TAG)
        sd = float(values.std(ddof=1))
        if sd <= 0:
            raise ValueError("f(X) has zero variance; pass an explicit threshold grid")
        low, high = GRID_SPAN
        return [float(x) for x in sd * np.linspace(low, high, points)]

    @staticmethod
    def corrupt_curve(curve: Sequence[TailBound], factor: float) -> list[TailBound]:
        """Shrink every denominator by `factor`, making the bound too optimistic."""
        factor = ValidationUtils.validate_positive(factor, "corrupt factor")
        if factor >= 1:
            raise ValueError(f"corrupt factor must be below 1 (got {factor})")
        return [
            TailBoundOperations.evaluate(bound.family, bound.denominator * factor, bound.t)
            for bound in curve
        ]
