"""Generalization bounds for uniformly stable learners trained on dependent samples."""

import math
from collections.abc import Sequence

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .base_operations import BaseOperations
from .tail_bounds import TailBound, TailBoundOperations
from .validation_utils import ValidationUtils


class StabilitySchedule(BaseModel):
    """Uniform stability coefficients beta_i for sample sizes i <= n.

    Exactly one of `beta_constant` (beta_i = B / i) or `beta_table`
    (beta_i = beta_table[i - 1]) is set. `delta_cap` is the largest number
    of removed points the expected-gap term accounts for.
    """

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    loss_bound: float = Field(gt=0)
    delta_cap: int = Field(default=0, ge=0)
    beta_constant: float | None = Field(default=None, ge=0)
    beta_table: tuple[float, ...] | None = None

    @model_validator(mode="after")
    def _check(self) -> "StabilitySchedule":
        if (self.beta_constant is None) == (self.beta_table is None):
            raise ValueError("Give exactly one of beta_constant or beta_table")
        if self.delta_cap >= self.n:
            raise ValueError(
                f"delta_cap must be smaller than n (got delta_cap={self.delta_cap}, n={self.n})"
            )
        if self.beta_table is not None:
            if len(self.beta_table) < self.n:
                raise ValueError(
                    f"beta_table needs an entry for every size 1..{self.n} (got {len(self.beta_table)})"
                )
            for i, beta in enumerate(self.beta_table, start=1):
                ValidationUtils.validate_non_negative(beta, f"beta_{i}")
        return self

    @classmethod
    def from_closed_form(
        cls, n: int, constant: float, loss_bound: float, delta_cap: int = 0
    ) -> "StabilitySchedule":
        return cls(n=n, loss_bound=loss_bound, delta_cap=delta_cap, beta_constant=constant)

    @classmethod
    def from_table(
        cls, betas: Sequence[float], loss_bound: float, delta_cap: int = 0
    ) -> "StabilitySchedule":
        return cls(n=len(betas), loss_bound=loss_bound, delta_cap=delta_cap, beta_table=tuple(betas))

    def beta(self, i: int) -> float:
        if not 1 <= i <= self.n:
            raise ValueError(f"Stability is only defined for sample sizes 1..{self.n} (got {i})")
        if self.beta_table is not None:
            return self.beta_table[i - 1]
        return self.beta_constant / i  # type: ignore[operator]

    def with_delta_cap(self, delta_cap: int) -> "StabilitySchedule":
        return type(self).model_validate(self.model_dump() | {"delta_cap": delta_cap})


class GeneralizationBound(BaseModel):
    """Risk bound split into its three terms."""

    model_config = ConfigDict(frozen=True)

    empirical_risk: float
    expected_gap: float
    deviation: float
    delta: float

    @property
    def total(self) -> float:
        return self.empirical_risk + self.expected_gap + self.deviation


class StabilityBoundOperations(BaseOperations):
    """Turn a stability schedule into concentration and risk bounds."""

    @staticmethod
    def beta_window(schedule: StabilitySchedule) -> float:
        """max of beta_{n-i} over 0 <= i <= delta_cap."""
        return max(schedule.beta(schedule.n - i) for i in range(schedule.delta_cap + 1))

    @staticmethod
    def stability_lipschitz_constant(schedule: StabilitySchedule) -> float:
        """Per-point Lipschitz constant 4 beta_n + M / n of the risk gap."""
        return 4.0 * schedule.beta(schedule.n) + schedule.loss_bound / schedule.n

    @staticmethod
    def stability_deviation_tail(schedule: StabilitySchedule, lambda_g: int, t: float) -> TailBound:
        """Tail of the risk gap around its mean: the general bound with the
        stability Lipschitz constant."""
        return TailBoundOperations.general_tail(
            lambda_g, StabilityBoundOperations.stability_lipschitz_constant(schedule), t
        )

    @staticmethod
    def expected_gap_bound(schedule: StabilitySchedule) -> float:
        """2 beta_{n,delta_cap} (delta_cap + 1)."""
        return 2.0 * StabilityBoundOperations.beta_window(schedule) * (schedule.delta_cap + 1)

    @staticmethod
    def generalization_terms(
        schedule: StabilitySchedule, lambda_g: int, empirical_risk: float, delta: float
    ) -> GeneralizationBound:
        """Empirical risk, expected gap and deviation terms at confidence 1 - delta.

        Args:
            schedule: Stability of the learner; its delta_cap is the dependency
                reach that the expected gap covers
            lambda_g: Forest complexity of the sample's dependency graph
            empirical_risk: Training risk of the learned hypothesis
            delta: Failure probability

        Raises:
            ValueError: On a non-positive Lambda or delta outside (0, 1)
        """
        ValidationUtils.validate_probability(delta)
        ValidationUtils.validate_non_negative(empirical_risk, "empirical_risk")
        c = StabilityBoundOperations.stability_lipschitz_constant(schedule)
        if c == 0:
            deviation = 0.0
        else:
            denominator = TailBoundOperations.general_denominator(lambda_g, c)
            deviation = TailBoundOperations.invert_tail(denominator, delta)
        return GeneralizationBound(
            empirical_risk=empirical_risk,
            expected_gap=StabilityBoundOperations.expected_gap_bound(schedule),
            deviation=deviation,
            delta=delta,
        )

    @staticmethod
    def generalization_bound(
        schedule: StabilitySchedule, lambda_g: int, empirical_risk: float, delta: float
    ) -> float:
        """R_hat + 2 beta_{n,D}(D+1) + (4 beta_n + M/n) sqrt(Lambda ln(1/delta) / 2)."""
        return StabilityBoundOperations.generalization_terms(
            schedule, lambda_g, empirical_risk, delta
        ).total

    @staticmethod
    def m_dependent_terms(
        schedule: StabilitySchedule, m: int, empirical_risk: float, delta: float
    ) -> GeneralizationBound:
        """Terms of the risk bound for an m-dependent training sample.

        Uses Lambda <= 4mn and a gap window of 2m removed points. m = 0 is the
        independent case: Lambda = n with no window.

        Raises:
            ValueError: If m < 0 or 2m >= n
        """
        n = schedule.n
        if m < 0:
            raise ValueError(f"m must be non-negative (got {m})")
        if m == 0:
            return StabilityBoundOperations.generalization_terms(
                schedule.with_delta_cap(0), n, empirical_risk, delta
            )
        if 2 * m >= n:
            raise ValueError(f"m-dependent bound needs 2m < n (got m={m}, n={n})")
        return StabilityBoundOperations.generalization_terms(
            schedule.with_delta_cap(2 * m), 4 * m * n, empirical_risk, delta
        )

    @staticmethod
    def m_dependent_generalization_bound(
        schedule: StabilitySchedule, m: int, empirical_risk: float, delta: float
    ) -> float:
        """R_hat + 2 beta_{n,2m}(2m+1) + (4n beta_n + M) sqrt(2m ln(1/delta) / n)."""
        return StabilityBoundOperations.m_dependent_terms(schedule, m, empirical_risk, delta).total
