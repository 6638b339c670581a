import logging
from typing import Optional, Tuple

import cvxpy as cp
import numpy as np

import constants
from clients.exceptions import EllipsoidSolverError
from .base_client import BaseSolverClient

logger = logging.getLogger(__name__)


class ConicClient(BaseSolverClient):
    """Log-det programs through cvxpy, retried with an alternate conic solver."""

    backend_name = "cvxpy"

    def __init__(self):
        super().__init__(option_ladder=constants.CONIC_SOLVER_LADDER)

    def _run(self, problem: dict, option: Optional[str]) -> Tuple[np.ndarray, np.ndarray]:
        A = problem["A"]
        b = problem["b"]
        m, d = A.shape
        B = cp.Variable((d, d), PSD=True)
        c = cp.Variable(d)
        constraints = [cp.SOC(b[i] - A[i] @ c, B @ A[i]) for i in range(m)]
        prob = cp.Problem(cp.Maximize(cp.log_det(B)), constraints)
        try:
            prob.solve(solver=option)
        except cp.error.SolverError as e:
            raise EllipsoidSolverError(str(e)) from e
        if prob.status not in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE) or B.value is None:
            raise EllipsoidSolverError(f"status {prob.status}")
        if prob.status == cp.OPTIMAL_INACCURATE:
            logger.warning(f"Ellipsoid program solved inaccurately by {option}.")
        shape_root = np.asarray(B.value)
        return 0.5 * (shape_root + shape_root.T), np.asarray(c.value)

    def max_volume_inscribed(self, A: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """
        Maximum-volume ellipsoid {c + B u : |u| <= 1} inside the bounded polytope {x : A x <= b}.

        Args:
            A: Halfspace normals, one per row.
            b: Halfspace offsets.

        Returns:
            (B, c): the symmetric positive-definite root of the shape matrix and the center.
        """
        return self._solve({"A": np.asarray(A, dtype=float), "b": np.asarray(b, dtype=float)})
