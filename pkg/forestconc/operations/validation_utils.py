import math
from collections.abc import Sequence


class ValidationUtils:
    """Centralized validation utilities for forestconc operations."""

    # Constants
    MIN_TRIALS = 1000
    DEFAULT_CONFIDENCE = 0.99
    MAX_GRID_POINTS = 1000

    @staticmethod
    def validate_positive(value: float, name: str) -> float:
        """Validate that a real parameter is finite and strictly positive.

        Args:
            value: The value to validate
            name: Parameter name used in the error message

        Returns:
            The value as a float

        Raises:
            ValueError: If value is not finite or not positive
        """
        value = float(value)
        if not math.isfinite(value) or value <= 0:
            raise ValueError(f"{name} must be a positive finite number (got {value})")
        return value

    @staticmethod
    def validate_non_negative(value: float, name: str) -> float:
        """Validate that a real parameter is finite and non-negative."""
        value = float(value)
        if not math.isfinite(value) or value < 0:
            raise ValueError(
                f"{name} must be a non-negative finite number (got {value})"
            )
        return value

    @staticmethod
    def validate_probability(delta: float, name: str = "delta") -> float:
        """Validate a probability strictly inside (0, 1).

        Raises:
            ValueError: If delta lies outside the open unit interval
        """
        delta = float(delta)
        if not 0.0 < delta < 1.0:
            raise ValueError(f"{name} must lie strictly between 0 and 1 (got {delta})")
        return delta

    @staticmethod
    def validate_threshold(t: float) -> float:
        """Validate a deviation threshold t > 0."""
        return ValidationUtils.validate_positive(t, "threshold t")

    @staticmethod
    def validate_t_grid(t_grid: Sequence[float]) -> list[float]:
        """Validate a threshold grid.

        Args:
            t_grid: Deviation thresholds

        Returns:
            The grid as a list of floats

        Raises:
            ValueError: If the grid is empty, too long, non-positive or not
                strictly increasing
        """
        if not t_grid:
            raise ValueError("Threshold grid cannot be empty")
        if len(t_grid) > ValidationUtils.MAX_GRID_POINTS:
            raise ValueError(
                f"Threshold grid exceeds maximum length of {ValidationUtils.MAX_GRID_POINTS} points (current: {len(t_grid)})"
            )
        grid = [ValidationUtils.validate_threshold(t) for t in t_grid]
        for previous, current in zip(grid, grid[1:]):
            if current <= previous:
                raise ValueError(
                    f"Threshold grid must be strictly increasing ({previous} is followed by {current})"
                )
        return grid

    @staticmethod
    def validate_trials(trials: int) -> int:
        """Validate a Monte Carlo trial count."""
        if trials < ValidationUtils.MIN_TRIALS:
            raise ValueError(
                f"trials must be at least {ValidationUtils.MIN_TRIALS} (got {trials})"
            )
        return int(trials)

    @staticmethod
    def validate_budget(n: int, max_n: int, what: str) -> None:
        """Validate that an exact enumeration fits its vertex budget.

        Raises:
            ValueError: If the instance has more than `max_n` vertices
        """
        if n > max_n:
            raise ValueError(
                f"Instance too large for {what}: {n} vertices exceeds the budget of {max_n}. "
                "Use the heuristic upper bounds instead."
            )

    @staticmethod
    def validate_lipschitz(c: Sequence[float], n: int) -> list[float]:
        """Validate a Lipschitz coefficient vector against a vertex count."""
        if len(c) != n:
            raise ValueError(
                f"Lipschitz vector has {len(c)} entries but the graph has {n} vertices"
            )
        return [ValidationUtils.validate_non_negative(ci, f"c[{i}]") for i, ci in enumerate(c)]

    @staticmethod
    def validate_rectangle(rect: Sequence[float], index: int) -> tuple[float, float, float, float]:
        """Validate an axis-aligned rectangle (x0, y0, x1, y1) inside the unit square.

        Raises:
            ValueError: If the rectangle is malformed, degenerate or leaves [0, 1]^2
        """
        if len(rect) != 4:
            raise ValueError(
                f"Rectangle {index} must have 4 coordinates (x0, y0, x1, y1), got {len(rect)}"
            )
        x0, y0, x1, y1 = (float(v) for v in rect)
        if not (0.0 <= x0 < x1 <= 1.0 and 0.0 <= y0 < y1 <= 1.0):
            raise ValueError(
                f"Rectangle {index} {tuple(rect)} must satisfy 0 <= x0 < x1 <= 1 and 0 <= y0 < y1 <= 1"
            )
        return x0, y0, x1, y1

    @staticmethod
    def parse_lipschitz_spec(spec: str, n: int) -> list[float]:
        """Parse a Lipschitz vector given as "uniform:x" or comma-separated values.

        Args:
            spec: "uniform:1.0" or "1,0.5,1"
            n: Expected length

        Returns:
            Validated coefficient list
        """
        spec = spec.strip()
        if not spec:
            raise ValueError("Lipschitz specification cannot be empty")
        if spec.startswith("uniform:"):
            value = ValidationUtils.validate_non_negative(
                float(spec.split(":", 1)[1]), "uniform Lipschitz coefficient"
            )
            return [value] * n
        try:
            values = [float(part) for part in spec.split(",") if part.strip()]
        except ValueError:
            raise ValueError(
                f"Lipschitz specification '{spec}' is neither 'uniform:x' nor a comma-separated list of numbers"
            )
        return ValidationUtils.validate_lipschitz(values, n)

    @staticmethod
    def parse_t_grid(spec: str) -> list[float]:
        """Parse a comma-separated threshold grid."""
        try:
            values = [float(part) for part in spec.split(",") if part.strip()]
        except ValueError:
            raise ValueError(f"Threshold grid '{spec}' must be comma-separated numbers")
        return ValidationUtils.validate_t_grid(values)
