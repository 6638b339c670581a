from fractions import Fraction
from typing import NamedTuple, Optional

import cdd
import numpy as np

import constants
from clients.exceptions import DoubleDescriptionError
from .base_client import BaseSolverClient


class CddOutput(NamedTuple):
    rows: np.ndarray
    linear: np.ndarray


def _to_rows(matrix: np.ndarray, number_type: str) -> list:
    if number_type == "fraction":
        return [[Fraction(float(x)) for x in row] for row in matrix]
    return matrix.tolist()


class CddClient(BaseSolverClient):
    """H-to-V and V-to-H conversion by the double description method, repeated in exact arithmetic on failure."""

    backend_name = "cdd"

    def __init__(self):
        super().__init__(option_ladder=constants.CDD_NUMBER_TYPE_LADDER)

    def _run(self, problem: dict, option: Optional[str]) -> CddOutput:
        matrix = problem["matrix"]
        width = matrix.shape[1]
        try:
            mat = cdd.Matrix(_to_rows(matrix, option), number_type=option)
            if problem["kind"] == "inequalities":
                mat.rep_type = cdd.RepType.INEQUALITY
                out = cdd.Polyhedron(mat).get_generators()
            else:
                mat.rep_type = cdd.RepType.GENERATOR
                out = cdd.Polyhedron(mat).get_inequalities()
                out.canonicalize()
        except (RuntimeError, ValueError) as e:
            raise DoubleDescriptionError(str(e)) from e

        rows = np.array([[float(x) for x in out[i]] for i in range(out.row_size)], dtype=float)
        rows = rows.reshape(out.row_size, width)
        if not np.all(np.isfinite(rows)):
            raise DoubleDescriptionError(f"Non-finite entries in the {option} conversion.")
        linear = np.zeros(out.row_size, dtype=bool)
        linear[list(out.lin_set)] = True
        return CddOutput(rows=rows, linear=linear)

    def generators(self, A: np.ndarray, b: np.ndarray) -> tuple:
        """
        Generators of {x : A x <= b}.

        Returns:
            (points, rays, lineality). `points` is empty when the system is infeasible. Each lineality
            direction is listed once and spans a line in both directions.
        """
        matrix = np.hstack([np.asarray(b, dtype=float)[:, None], -np.asarray(A, dtype=float)])
        out = self._solve({"kind": "inequalities", "matrix": matrix})
        is_point = out.rows[:, 0] > 0.5
        # cdd scales point rows so that the leading entry is one
        points = out.rows[is_point, 1:] / out.rows[is_point, :1]
        rays = out.rows[~is_point & ~out.linear, 1:]
        lineality = out.rows[~is_point & out.linear, 1:]
        return points, rays, lineality

    def inequalities(self, points: np.ndarray, rays: np.ndarray) -> tuple:
        """
        Irredundant description A x <= b of conv(points) + cone(rays).

        Returns:
            (A, b, equality) where `equality` marks the rows that hold with equality on the whole set.
        """
        points = np.asarray(points, dtype=float)
        rays = np.asarray(rays, dtype=float).reshape(-1, points.shape[1])
        matrix = np.vstack([
            np.hstack([np.ones((len(points), 1)), points]),
            np.hstack([np.zeros((len(rays), 1)), rays])
        ])
        out = self._solve({"kind": "generators", "matrix": matrix})
        return -out.rows[:, 1:], out.rows[:, 0], out.linear
