import asyncio
import logging
from typing import Callable, List, Sequence, Tuple

import numpy as np

import constants
from logic.exceptions import CvxLabError

logger = logging.getLogger(__name__)

Evaluation = Tuple[Tuple[float, ...], float]


class EvaluationBatcher:
    """
    Collects parameter vectors and evaluates them in concurrent batches.
    It acts as an async context manager so the final partial batch is always evaluated.
    """

    def __init__(self, evaluate: Callable[[np.ndarray], float], batch_size: int):
        """
        Initializes the batcher.

        Args:
            evaluate: Blocking objective; it runs in worker threads.
            batch_size: Number of points evaluated concurrently per flush.
        """
        if batch_size < 1:
            raise ValueError("Batch size must be at least 1.")
        self.evaluate = evaluate
        self.batch_size = batch_size
        self._batch: List[Tuple[float, ...]] = []
        self._lock = asyncio.Lock()
        self.results: List[Evaluation] = []

    async def __aenter__(self):
        return self

    async def __aexit__(self, exc_type, exc_val, exc_tb):
        await self.flush()

    async def add(self, point: Sequence[float]):
        self._batch.append(tuple(float(p) for p in point))
        if len(self._batch) >= self.batch_size:
            await self.flush()

    def _safe_evaluate(self, point: Tuple[float, ...]) -> float:
        try:
            return self.evaluate(np.asarray(point))
        except CvxLabError as e:
            logger.debug(f"Lattice point {point} is infeasible: {e}")
            return constants.INFEASIBLE_SCORE

    async def flush(self):
        """Evaluates every queued point; results keep insertion order."""
        async with self._lock:
            if not self._batch:
                return

            batch_to_send = self._batch.copy()
            self._batch.clear()

            logger.debug(f"Flushing batch of {len(batch_to_send)} lattice points...")
            values = await asyncio.gather(*[asyncio.to_thread(self._safe_evaluate, p) for p in batch_to_send])
            self.results.extend(zip(batch_to_send, values))

    def best(self) -> Evaluation:
        """Largest (point, value); ties go to the lexicographically smallest point."""
        if not self.results:
            raise ValueError("No evaluations collected.")
        return min(self.results, key=lambda r: (-r[1], r[0]))
