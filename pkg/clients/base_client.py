# file: clients/base_client.py

import logging
from abc import ABC, abstractmethod
from typing import Any, Optional, Sequence

import numpy as np
from tenacity import Retrying, RetryCallState, stop_after_attempt, wait_exponential

from clients.exceptions import SolverError

logger = logging.getLogger(__name__)


def _describe(value: Any) -> str:
    if isinstance(value, np.ndarray):
        if value.size == 0:
            return f"array{value.shape} (empty)"
        return f"array{value.shape} min={value.min():.3e} max={value.max():.3e}"
    return repr(value)


def _log_failed_solve(backend: str, option: Any, problem: dict, e: Exception):
    """Log the shape of a problem that a backend refused to solve."""
    logger.error(f"--- FAILED SOLVE DETAILS ({backend}) ---")
    logger.error(f"Option: {option}")
    for key, value in problem.items():
        logger.error(f"{key}: {_describe(value)}")
    logger.error(f"Error: {e}")
    logger.error("------------------------------")


def _is_retryable_exception(retry_state: RetryCallState) -> bool:
    exception = retry_state.outcome.exception()

    if not exception:
        return False

    if isinstance(exception, SolverError):
        logger.warning(f"Solver attempt {retry_state.attempt_number} failed: {exception}. "
                       f"Retrying with the next option...")
        return True

    return False


class BaseSolverClient(ABC):
    """
    Common retry wrapper around a numerical backend.

    Every concrete client declares an option ladder. A call runs with the first option; when the
    backend raises a SolverError the call is repeated with the next option until the ladder is exhausted,
    and the last error is re-raised.
    """

    backend_name: str = "solver"

    def __init__(self, option_ladder: Sequence[Any]):
        if not option_ladder:
            raise ValueError("Option ladder must contain at least one option.")
        self._option_ladder = tuple(option_ladder)

    @property
    def option_ladder(self) -> tuple:
        return self._option_ladder

    def _solve(self, problem: dict) -> Any:
        retrying = Retrying(
            wait=wait_exponential(multiplier=0.01, max=0.1),
            stop=stop_after_attempt(len(self._option_ladder)),
            retry=_is_retryable_exception,
            reraise=True
        )
        for attempt in retrying:
            with attempt:
                option = self._option_ladder[attempt.retry_state.attempt_number - 1]
                try:
                    return self._run(problem, option)
                except SolverError as e:
                    _log_failed_solve(self.backend_name, option, problem, e)
                    raise

    @abstractmethod
    def _run(self, problem: dict, option: Optional[Any]) -> Any:
        raise NotImplementedError
