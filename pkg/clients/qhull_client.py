from typing import Optional

import numpy as np
from scipy.spatial import Delaunay, QhullError

import constants
from clients.exceptions import HullComputationError
from .base_client import BaseSolverClient


class QhullClient(BaseSolverClient):
    """Delaunay triangulation through qhull, retried with joggled input."""

    backend_name = "qhull"

    def __init__(self):
        super().__init__(option_ladder=constants.QHULL_OPTION_LADDER)

    def _run(self, problem: dict, option: Optional[str]) -> np.ndarray:
        try:
            return np.asarray(Delaunay(problem["points"], qhull_options=option).simplices)
        except (QhullError, ValueError) as e:
            raise HullComputationError(str(e)) from e

    def delaunay(self, points: np.ndarray) -> np.ndarray:
        """Simplices (index rows) of a Delaunay triangulation of full-dimensional points."""
        return self._solve({"points": np.asarray(points, dtype=float)})
