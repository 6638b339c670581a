import logging
from typing import Optional, Tuple

import numpy as np
from scipy.linalg import orth
from scipy.spatial import cKDTree

from clients.cdd_client import CddClient
from logic.exceptions import EmptyPolyhedron, ImproperInput
from models.geometry_models import Halfspace, PolyhedronModel
from utils.config import settings

logger = logging.getLogger(__name__)

_cdd = CddClient()


def _tol(tol: Optional[float]) -> float:
    return settings.TOL if tol is None else tol


def _as_matrix(rows, dim: int) -> np.ndarray:
    if rows is None:
        return np.zeros((0, dim))
    arr = np.asarray(rows, dtype=float)
    if arr.size == 0:
        return np.zeros((0, dim))
    return arr.reshape(-1, dim)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=float)
    arr.setflags(write=False)
    return arr


def _unique_points(points: np.ndarray, tol: float) -> np.ndarray:
    """Drop points within `tol` of an earlier kept point."""
    if len(points) <= 1:
        return points
    tree = cKDTree(points)
    taken = np.zeros(len(points), dtype=bool)
    keep = []
    for i in range(len(points)):
        if taken[i]:
            continue
        keep.append(i)
        taken[tree.query_ball_point(points[i], r=tol)] = True
    return points[keep]


def _lexsorted(points: np.ndarray) -> np.ndarray:
    if len(points) <= 1:
        return points
    return points[np.lexsort(points.T[::-1])]


def _scale(points: np.ndarray) -> float:
    return max(1.0, float(np.abs(points).max())) if points.size else 1.0


def _normalize_rows(A: np.ndarray, b: np.ndarray, tol: float) -> Tuple[np.ndarray, np.ndarray]:
    norms = np.linalg.norm(A, axis=1)
    zero = norms <= tol
    if np.any(b[zero] < -tol):
        raise EmptyPolyhedron("A constraint 0 <= offset has a negative offset.")
    keep = ~zero
    return A[keep] / norms[keep, None], b[keep] / norms[keep]


def _canonical_rows(A: np.ndarray, b: np.ndarray, tol: float) -> Tuple[np.ndarray, np.ndarray]:
    if len(b) == 0:
        return A, b
    stacked = np.hstack([A, b[:, None]])
    stacked = _lexsorted(_unique_points(stacked, tol * _scale(stacked)))
    return stacked[:, :-1], stacked[:, -1]


def _canonical_points(vertices: np.ndarray, rays: np.ndarray, tol: float) -> Tuple[np.ndarray, np.ndarray]:
    vertices = _lexsorted(_unique_points(vertices, tol * _scale(vertices)))
    if len(rays):
        rays = rays / np.linalg.norm(rays, axis=1)[:, None]
        rays = _lexsorted(_unique_points(rays, tol))
    return vertices, rays


def _interval(a: np.ndarray, b: np.ndarray, tol: float) -> Tuple[np.ndarray, np.ndarray, int]:
    """Vertices, rays and affine dimension of {x in R : a_i x <= b_i} with a_i = +-1."""
    upper = b[a > 0] / a[a > 0]
    lower = b[a < 0] / a[a < 0]
    hi = upper.min() if upper.size else np.inf
    lo = lower.max() if lower.size else -np.inf
    scale = max(1.0, abs(lo) if np.isfinite(lo) else 1.0, abs(hi) if np.isfinite(hi) else 1.0)
    if lo > hi + tol * scale:
        raise EmptyPolyhedron(f"Empty interval [{lo}, {hi}].")
    if np.isfinite(lo) and np.isfinite(hi) and hi - lo <= tol * scale:
        return np.array([[0.5 * (lo + hi)]]), np.zeros((0, 1)), 0
    vertices = [[v] for v in (lo, hi) if np.isfinite(v)]
    rays = []
    if not np.isfinite(lo):
        rays.append([-1.0])
    if not np.isfinite(hi):
        rays.append([1.0])
    if not vertices:
        vertices = [[0.0]]
    return np.array(vertices), np.array(rays).reshape(-1, 1), 1


def _affine_dim(vertices: np.ndarray, rays: np.ndarray, tol: float) -> int:
    directions = np.vstack([vertices[1:] - vertices[0], rays])
    if len(directions) == 0:
        return 0
    return int(np.linalg.matrix_rank(directions, tol=tol * _scale(directions)))


def _enumerate(A: np.ndarray, b: np.ndarray, tol: float) -> Tuple[np.ndarray, np.ndarray, int]:
    """H-to-V conversion: (vertices, rays, affine_dim) of {x : A x <= b}."""
    d = A.shape[1]
    A, b = _normalize_rows(A, b, tol)
    if d == 1:
        return _interval(A[:, 0], b, tol)
    if len(b) == 0:
        eye = np.eye(d)
        return np.zeros((1, d)), np.vstack([eye, -eye]), d
    vertices, rays, lineality = _cdd.generators(A, b)
    if len(vertices) == 0:
        raise EmptyPolyhedron("Halfspace intersection is empty.")
    if len(lineality):
        # one point per minimal face, taken orthogonal to the lineality space
        Q = orth(lineality.T)
        vertices = vertices - (vertices @ Q) @ Q.T
        rays = np.vstack([rays, lineality, -lineality])
    logger.debug(f"Enumerated {len(vertices)} vertices and {len(rays)} rays from {len(b)} halfspaces")
    return vertices, rays, _affine_dim(vertices, rays, tol)


def _facets(vertices: np.ndarray, rays: np.ndarray, dim: int, tol: float) -> Tuple[np.ndarray, np.ndarray]:
    """V-to-H conversion; equalities are returned as pairs of opposite halfspaces."""
    if len(vertices) == 0:
        raise ImproperInput("A polyhedron needs at least one vertex.")
    if dim == 1:
        return _interval_facets(vertices[:, 0], rays[:, 0] if len(rays) else np.zeros(0), tol)
    A, b, equality = _cdd.inequalities(vertices, rays)
    A = np.vstack([A, -A[equality]])
    b = np.concatenate([b, -b[equality]])
    return _normalize_rows(A, b, tol)


def _interval_facets(points: np.ndarray, directions: np.ndarray, tol: float) -> Tuple[np.ndarray, np.ndarray]:
    rows, offsets = [], []
    if not np.any(directions > tol):
        rows.append([1.0])
        offsets.append(points.max())
    if not np.any(directions < -tol):
        rows.append([-1.0])
        offsets.append(-points.min())
    return _as_matrix(rows, 1), np.asarray(offsets, dtype=float)


class Polyhedron:
    """
    Convex polyhedron in R^dim with both representations.

    A polyhedron built from halfspaces computes its vertices and rays on first access, and one
    built from generators computes its irredundant halfspaces and then re-enumerates canonical
    vertices from them. Lineality directions are listed as pairs of opposite rays.
    Instances are immutable.
    """

    def __init__(self, dim: int, hrep: Optional[Tuple[np.ndarray, np.ndarray]] = None,
                 generators: Optional[Tuple[np.ndarray, np.ndarray]] = None,
                 vrep: Optional[Tuple[np.ndarray, np.ndarray, int]] = None,
                 tol: Optional[float] = None):
        self.dim = int(dim)
        self.tol = _tol(tol)
        self._hrep = None
        self._generators = None
        self._vrep = None
        if hrep is not None:
            A, b = hrep
            self._hrep = (_frozen(A), _frozen(b))
        if generators is not None:
            self._generators = generators
        if vrep is not None:
            V, R, k = vrep
            self._vrep = (_frozen(V), _frozen(R), int(k))
        if self._hrep is None and self._generators is None and self._vrep is None:
            raise ValueError("Polyhedron needs a representation.")

    # --- construction ---

    @classmethod
    def from_hrep(cls, A, b, dim: Optional[int] = None, tol: Optional[float] = None) -> 'Polyhedron':
        tol = _tol(tol)
        if dim is None:
            dim = np.asarray(A).shape[-1]
        A = _as_matrix(A, dim)
        b = np.asarray(b, dtype=float).reshape(-1)
        if len(b) != len(A):
            raise ValueError(f"{len(A)} normals but {len(b)} offsets.")
        A, b = _normalize_rows(A, b, tol)
        A, b = _canonical_rows(A, b, tol)
        return cls(dim, hrep=(A, b), tol=tol)

    @classmethod
    def from_vrep(cls, vertices, rays=None, dim: Optional[int] = None, tol: Optional[float] = None) -> 'Polyhedron':
        if dim is None:
            dim = np.asarray(vertices).shape[-1]
        V = _as_matrix(vertices, dim)
        R = _as_matrix(rays, dim)
        if len(V) == 0:
            raise ImproperInput("A polyhedron needs at least one vertex.")
        if len(R):
            norms = np.linalg.norm(R, axis=1)
            R = R[norms > 0] / norms[norms > 0, None]
        return cls(dim, generators=(V, R), tol=tol)

    @classmethod
    def whole_space(cls, dim: int) -> 'Polyhedron':
        eye = np.eye(dim)
        return cls(dim, hrep=(np.zeros((0, dim)), np.zeros(0)),
                   vrep=(np.zeros((1, dim)), _lexsorted(np.vstack([eye, -eye])), dim))

    @classmethod
    def from_model(cls, model: PolyhedronModel, tol: Optional[float] = None) -> 'Polyhedron':
        from_h = None
        if model.halfspaces is not None:
            A = [h.normal for h in model.halfspaces]
            b = [h.offset for h in model.halfspaces]
            from_h = cls.from_hrep(A, b, dim=model.dim, tol=tol)
        if model.vertices is None:
            return from_h
        from_v = cls.from_vrep(model.vertices, model.rays, dim=model.dim, tol=tol)
        if from_h is not None and not from_h.equals(from_v):
            raise ImproperInput("Halfspaces and vertices describe different sets.")
        return from_h if from_h is not None else from_v

    def to_model(self) -> PolyhedronModel:
        A, b = self.hrep
        return PolyhedronModel(
            dim=self.dim,
            halfspaces=[Halfspace(normal=a.tolist(), offset=float(o)) for a, o in zip(A, b)],
            vertices=self.vertices.tolist(),
            rays=self.rays.tolist()
        )

    # --- representations ---

    @property
    def hrep(self) -> Tuple[np.ndarray, np.ndarray]:
        if self._hrep is None:
            if self._generators is not None:
                V, R = self._generators
            else:
                V, R, _ = self._vrep
            A, b = _facets(V, R, self.dim, self.tol)
            A, b = _canonical_rows(A, b, self.tol)
            self._hrep = (_frozen(A), _frozen(b))
        return self._hrep

    @property
    def A(self) -> np.ndarray:
        return self.hrep[0]

    @property
    def b(self) -> np.ndarray:
        return self.hrep[1]

    @property
    def vrep(self) -> Tuple[np.ndarray, np.ndarray, int]:
        if self._vrep is None:
            A, b = self.hrep
            V, R, k = _enumerate(np.array(A), np.array(b), self.tol)
            V, R = _canonical_points(V, R, self.tol)
            self._vrep = (_frozen(V), _frozen(R.reshape(-1, self.dim)), k)
        return self._vrep

    @property
    def vertices(self) -> np.ndarray:
        return self.vrep[0]

    @property
    def rays(self) -> np.ndarray:
        return self.vrep[1]

    @property
    def affine_dim(self) -> int:
        return self.vrep[2]

    # --- predicates ---

    def is_empty(self) -> bool:
        try:
            self.vrep
        except EmptyPolyhedron:
            return True
        return False

    @property
    def is_bounded(self) -> bool:
        return len(self.rays) == 0

    @property
    def is_full_dim(self) -> bool:
        return self.affine_dim == self.dim

    def slack(self, x: np.ndarray) -> np.ndarray:
        A, b = self.hrep
        return b - A @ np.asarray(x, dtype=float)

    def contains_point(self, x, tol: Optional[float] = None) -> bool:
        tol = self.tol if tol is None else tol
        x = np.asarray(x, dtype=float)
        A, b = self.hrep
        return bool(np.all(A @ x <= b + tol * max(1.0, float(np.abs(x).max(initial=0.0)))))

    def margin(self, other: 'Polyhedron') -> float:
        """min over halfspaces of self and vertices of other of the slack; -inf if a ray of other escapes."""
        A, b = self.hrep
        if len(b) == 0:
            return np.inf
        if len(other.rays) and np.any(A @ other.rays.T > self.tol):
            return -np.inf
        return float((b[:, None] - A @ other.vertices.T).min())

    def contains(self, other: 'Polyhedron', tol: Optional[float] = None) -> bool:
        """True iff other is a subset of self, within tolerance."""
        tol = self.tol if tol is None else tol
        if other.dim != self.dim:
            return False
        A, b = self.hrep
        if len(b) == 0:
            return True
        if len(other.rays) and np.any(A @ other.rays.T > tol * 10):
            return False
        scale = _scale(other.vertices)
        return bool(np.all(A @ other.vertices.T <= b[:, None] + tol * scale))

    def equals(self, other: 'Polyhedron', tol: Optional[float] = None) -> bool:
        return self.contains(other, tol) and other.contains(self, tol)

    def max_norm(self) -> float:
        if not self.is_bounded:
            return np.inf
        return float(np.linalg.norm(self.vertices, axis=1).max())

    def support(self, direction: np.ndarray) -> float:
        direction = np.asarray(direction, dtype=float)
        if len(self.rays) and np.any(self.rays @ direction > self.tol):
            return np.inf
        return float((self.vertices @ direction).max())

    # --- operations ---

    def linear_image(self, M: np.ndarray, shift: Optional[np.ndarray] = None) -> 'Polyhedron':
        """Image under the invertible affine map x -> M x + shift; computed representations are mapped."""
        M = np.asarray(M, dtype=float).reshape(self.dim, self.dim)
        shift = np.zeros(self.dim) if shift is None else np.asarray(shift, dtype=float)
        Minv = np.linalg.inv(M)
        hrep = vrep = generators = None
        if self._hrep is not None:
            A, b = self._hrep
            A2 = A @ Minv
            b2 = b + A2 @ shift
            norms = np.linalg.norm(A2, axis=1)
            hrep = _canonical_rows(A2 / norms[:, None], b2 / norms, self.tol)
        if self._vrep is not None:
            V, R, k = self._vrep
            V2, R2 = _canonical_points(V @ M.T + shift, R @ M.T, self.tol)
            vrep = (V2, R2.reshape(-1, self.dim), k)
        elif self._generators is not None and hrep is None:
            V, R = self._generators
            generators = (V @ M.T + shift, R @ M.T)
        return Polyhedron(self.dim, hrep=hrep, generators=generators, vrep=vrep, tol=self.tol)

    def translate(self, shift: np.ndarray) -> 'Polyhedron':
        return self.linear_image(np.eye(self.dim), shift)

    def scaled(self, factor: float) -> 'Polyhedron':
        return self.linear_image(factor * np.eye(self.dim))

    def intersect(self, other: 'Polyhedron') -> 'Polyhedron':
        A1, b1 = self.hrep
        A2, b2 = other.hrep
        return Polyhedron.from_hrep(np.vstack([A1, A2]), np.concatenate([b1, b2]), dim=self.dim, tol=self.tol)

    def with_halfspaces(self, A, b) -> 'Polyhedron':
        A0, b0 = self.hrep
        A = _as_matrix(A, self.dim)
        return Polyhedron.from_hrep(np.vstack([A0, A]), np.concatenate([b0, np.asarray(b, dtype=float).reshape(-1)]),
                                    dim=self.dim, tol=self.tol)

    def canonical(self) -> 'Polyhedron':
        """Irredundant halfspaces and canonical vertices."""
        V, R, _ = self.vrep
        return Polyhedron.from_vrep(V, R, dim=self.dim, tol=self.tol)

    def __repr__(self) -> str:
        parts = [f"dim={self.dim}"]
        if self._hrep is not None:
            parts.append(f"halfspaces={len(self._hrep[1])}")
        if self._vrep is not None:
            parts.append(f"vertices={len(self._vrep[0])}, rays={len(self._vrep[1])}, affine_dim={self._vrep[2]}")
        return f"Polyhedron({', '.join(parts)})"


def to_vrep(p: Polyhedron) -> Polyhedron:
    """Return p with its vertex/ray representation computed. Raises EmptyPolyhedron for an empty system."""
    p.vrep
    return p


def to_hrep(p: Polyhedron) -> Polyhedron:
    """Return p with an irredundant halfspace representation computed."""
    q = p if p._hrep is None else p.canonical()
    q.hrep
    return q
