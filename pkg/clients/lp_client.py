from typing import NamedTuple, Optional

import numpy as np
from scipy.optimize import linprog, nnls

import constants
from clients.exceptions import LinearProgramError
from .base_client import BaseSolverClient


# linprog status codes
_OPTIMAL = 0
_INFEASIBLE = 2
_UNBOUNDED = 3


class LPResult(NamedTuple):
    status: int
    x: Optional[np.ndarray]
    fun: Optional[float]

    @property
    def is_optimal(self) -> bool:
        return self.status == _OPTIMAL

    @property
    def is_infeasible(self) -> bool:
        return self.status == _INFEASIBLE

    @property
    def is_unbounded(self) -> bool:
        return self.status == _UNBOUNDED


class LinearProgramClient(BaseSolverClient):
    backend_name = "linprog"

    def __init__(self):
        super().__init__(option_ladder=constants.LP_METHOD_LADDER)

    def _run(self, problem: dict, option: Optional[str]) -> LPResult:
        res = linprog(problem["c"], A_ub=problem["A_ub"], b_ub=problem["b_ub"],
                      A_eq=problem.get("A_eq"), b_eq=problem.get("b_eq"),
                      bounds=problem["bounds"], method=option)
        if res.status in (_OPTIMAL, _INFEASIBLE, _UNBOUNDED):
            x = np.asarray(res.x) if res.x is not None else None
            return LPResult(status=res.status, x=x, fun=res.fun)
        raise LinearProgramError(f"status {res.status}: {res.message}")

    def minimize(self, c: np.ndarray, A_ub: np.ndarray, b_ub: np.ndarray, bounds,
                 A_eq: Optional[np.ndarray] = None, b_eq: Optional[np.ndarray] = None) -> LPResult:
        problem = {"c": np.asarray(c, dtype=float), "A_ub": A_ub, "b_ub": b_ub, "bounds": bounds}
        if A_eq is not None:
            problem.update(A_eq=A_eq, b_eq=b_eq)
        return self._solve(problem)

    @staticmethod
    def project(A: np.ndarray, b: np.ndarray, point: np.ndarray) -> Optional[np.ndarray]:
        """
        Nearest point of {x : A x <= b} to `point`, by least distance programming through NNLS.

        Returns:
            The projection, or None when the system is infeasible.
        """
        point = np.asarray(point, dtype=float)
        if A.shape[0] == 0:
            return point.copy()
        h = b - A @ point
        if np.all(h >= 0):
            return point.copy()
        # min |y| s.t. G y >= g with G = -A, g = -h
        G = -A
        g = -h
        d = A.shape[1]
        E = np.vstack([G.T, g[None, :]])
        f = np.zeros(d + 1)
        f[-1] = 1.0
        u, _ = nnls(E, f, maxiter=50 * (E.shape[1] + 1))
        r = E @ u - f
        if np.linalg.norm(r) <= 1e-14 or abs(r[-1]) <= 1e-14:
            return None
        y = -r[:d] / r[-1]
        return point + y
