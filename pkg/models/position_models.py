from typing import List, Literal, Optional

import numpy as np
from pydantic import BaseModel, model_validator

TargetClass = Literal["S_e", "S_1c", "S_2"]


class Normalization(BaseModel):
    """
    Certificate of a John-position normalization.

    The normalized function is x -> phi(M^-1 x) - vshift with M = rotation @ linear, so every level set
    of the result is M applied to the corresponding level set of phi - vshift.
    """
    linear: List[List[float]]
    rotation: List[List[float]]
    vshift: float = 0.0
    witness_t: Optional[float] = None
    target_class: TargetClass
    margins: List[float]
    near_boundary: bool = False

    @model_validator(mode='after')
    def _check_matrices(self) -> 'Normalization':
        T = np.asarray(self.linear, dtype=float)
        O = np.asarray(self.rotation, dtype=float)
        if T.shape != O.shape or T.ndim != 2 or T.shape[0] != T.shape[1]:
            raise ValueError("Linear and rotation parts must be square matrices of the same size.")
        if abs(np.linalg.det(T)) <= 0:
            raise ValueError("Linear part must be invertible.")
        if not np.allclose(O @ O.T, np.eye(len(O)), atol=1e-9):
            raise ValueError("Rotation part must be orthogonal.")
        if self.witness_t is not None and not 0.0 <= self.witness_t <= len(T) + 1e-9:
            raise ValueError(f"Witness t = {self.witness_t} outside [0, n].")
        return self

    @property
    def matrix(self) -> np.ndarray:
        return np.asarray(self.rotation, dtype=float) @ np.asarray(self.linear, dtype=float)
