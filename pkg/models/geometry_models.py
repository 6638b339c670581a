from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class Halfspace(BaseModel):
    """The set {x : <normal, x> <= offset}, stored with a unit normal."""
    normal: List[float]
    offset: float

    @model_validator(mode='after')
    def _normalize(self) -> 'Halfspace':
        norm = float(np.linalg.norm(self.normal))
        if norm == 0.0 or not np.isfinite(norm):
            raise ValueError("Halfspace normal must be a nonzero finite vector.")
        if norm != 1.0:
            self.normal = [v / norm for v in self.normal]
            self.offset = self.offset / norm
        return self


class PolyhedronModel(BaseModel):
    dim: int = Field(..., ge=1)
    halfspaces: Optional[List[Halfspace]] = None
    vertices: Optional[List[List[float]]] = None
    rays: Optional[List[List[float]]] = None

    @model_validator(mode='after')
    def _check_shapes(self) -> 'PolyhedronModel':
        if self.halfspaces is None and self.vertices is None:
            raise ValueError("Polyhedron needs halfspaces or vertices.")
        for h in self.halfspaces or []:
            if len(h.normal) != self.dim:
                raise ValueError(f"Halfspace normal has length {len(h.normal)}, expected {self.dim}.")
        for v in (self.vertices or []) + (self.rays or []):
            if len(v) != self.dim:
                raise ValueError(f"Point of length {len(v)} in a polyhedron of dimension {self.dim}.")
        return self


class Ellipsoid(BaseModel):
    """The set {x : (x - center)^T shape^-1 (x - center) <= 1}."""
    model_config = ConfigDict(frozen=True)

    center: List[float]
    shape: List[List[float]]

    @field_validator('shape')
    @classmethod
    def _check_shape(cls, shape: List[List[float]]) -> List[List[float]]:
        m = np.asarray(shape, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("Ellipsoid shape must be a square matrix.")
        if not np.allclose(m, m.T, atol=1e-9 * max(1.0, np.abs(m).max())):
            raise ValueError("Ellipsoid shape must be symmetric.")
        if np.linalg.eigvalsh(0.5 * (m + m.T)).min() <= 0:
            raise ValueError("Ellipsoid shape must be positive definite.")
        return shape

    @property
    def center_vector(self) -> np.ndarray:
        return np.asarray(self.center, dtype=float)

    @property
    def shape_matrix(self) -> np.ndarray:
        return np.asarray(self.shape, dtype=float)

    @property
    def root(self) -> np.ndarray:
        """Symmetric square root B of the shape matrix, so the ellipsoid is center + B * ball."""
        w, V = np.linalg.eigh(self.shape_matrix)
        return (V * np.sqrt(w)) @ V.T

    def gauge(self, x: np.ndarray) -> float:
        """Ellipsoidal norm of x - center; the ellipsoid is where this is at most 1."""
        y = np.asarray(x, dtype=float) - self.center_vector
        return float(np.sqrt(y @ np.linalg.solve(self.shape_matrix, y)))

    def volume_factor(self) -> float:
        """sqrt(det shape): the ellipsoid volume divided by the unit-ball volume."""
        return float(np.sqrt(np.linalg.det(self.shape_matrix)))
