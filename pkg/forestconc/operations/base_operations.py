import asyncio
import logging
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from typing import Any, TypeVar

import numpy as np

T = TypeVar("T")
R = TypeVar("R")

logger = logging.getLogger(__name__)


# Default timeout for blocking work launched from the MCP server (seconds).
# Exact oracles on 12-vertex graphs and 10^5-trial simulations fit well inside.
BLOCKING_TIMEOUT = 300

# Trials per random stream. Fixed so that results do not depend on --workers.
CHUNK_TRIALS = 10_000


class BaseOperations:
    """Base class with shared execution helpers for all operations."""

    @staticmethod
    def map_ordered(
        fn: Callable[[T], R], tasks: Sequence[T], workers: int = 1
    ) -> list[R]:
        """Apply `fn` to every task and return the results in task order.

        Args:
            fn: Picklable top-level function
            tasks: Independent work items
            workers: Process count; 1 runs inline

        Returns:
            Results aligned with `tasks`
        """
        if workers < 1:
            raise ValueError(f"workers must be at least 1 (got {workers})")
        if workers == 1 or len(tasks) <= 1:
            return [fn(task) for task in tasks]

        logger.debug("Dispatching %d tasks to %d workers", len(tasks), workers)
        with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
            return list(pool.map(fn, tasks))

    @staticmethod
    def stream(seed: int, *key: int) -> np.random.Generator:
        """Counter-based generator keyed by (seed, *key).

        Distinct keys give statistically independent streams, and the same key
        always reproduces the same stream regardless of scheduling.
        """
        if seed < 0:
            raise ValueError(f"seed must be non-negative (got {seed})")
        return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, *key])))

    @staticmethod
    def chunk_sizes(trials: int, chunk: int = CHUNK_TRIALS) -> list[int]:
        """Split `trials` into fixed-size chunks (the last one may be shorter)."""
        full, rest = divmod(trials, chunk)
        return [chunk] * full + ([rest] if rest else [])

    @staticmethod
    async def run_blocking(
        fn: Callable[..., R], *args: Any, timeout: float = BLOCKING_TIMEOUT
    ) -> R:
        """Run CPU-bound work off the event loop and return its result.

        Args:
            fn: The blocking callable
            *args: Positional arguments for `fn`
            timeout: Maximum seconds to wait before raising TimeoutError

        Raises:
            TimeoutError: If the work takes longer than `timeout` seconds
        """
        try:
            return await asyncio.wait_for(asyncio.to_thread(fn, *args), timeout=timeout)
        except asyncio.TimeoutError:
            raise TimeoutError(
                f"Computation timed out after {timeout}s. "
                "Exact oracles grow exponentially with the vertex count. "
                "Try a smaller graph or fewer Monte Carlo trials."
            )

    @staticmethod
    def flatten(chunks: Iterable[np.ndarray]) -> np.ndarray:
        """Concatenate per-chunk arrays in chunk order."""
        parts = list(chunks)
        if not parts:
            return np.empty(0)
        return np.concatenate(parts)
