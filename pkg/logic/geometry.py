import math
from typing import Optional

import numpy as np

from clients.lp_client import LinearProgramClient
from clients.qhull_client import QhullClient
from logic.exceptions import DegenerateBody, UnboundedInput
from logic.polyhedron import Polyhedron
from utils.config import settings


_lp = LinearProgramClient()
_qhull = QhullClient()


def polar(p: Polyhedron) -> Polyhedron:
    """
    Polar set {y : <x, y> <= 1 for all x in p}, from the generators of p.

    Vertices give <v, y> <= 1, rays and lineality give <r, y> <= 0. The result may be unbounded
    or lower-dimensional; a vertex at the origin contributes nothing.
    """
    V, R, _ = p.vrep
    A = np.vstack([V, R])
    b = np.concatenate([np.ones(len(V)), np.zeros(len(R))])
    return Polyhedron.from_hrep(A, b, dim=p.dim, tol=p.tol)


def _simplices(p: Polyhedron) -> np.ndarray:
    """Vertex coordinates of a triangulation of a bounded full-dimensional polytope, shape (k, d+1, d)."""
    V = p.vertices
    if len(V) == p.dim + 1:
        return V[None, :, :]
    return V[_qhull.delaunay(V)]


def volume(p: Polyhedron) -> float:
    """Lebesgue volume in R^dim: 0 for lower-dimensional sets, inf for unbounded full-dimensional ones."""
    if p.affine_dim < p.dim:
        return 0.0
    if not p.is_bounded:
        return math.inf
    if p.dim == 1:
        return float(p.vertices.max() - p.vertices.min())
    S = _simplices(p)
    edges = S[:, 1:, :] - S[:, :1, :]
    return float(np.abs(np.linalg.det(edges)).sum() / math.factorial(p.dim))


def moment(p: Polyhedron) -> np.ndarray:
    """First moment, the integral of x over p."""
    if not p.is_bounded:
        raise UnboundedInput("Moment of an unbounded polyhedron.")
    if p.affine_dim < p.dim:
        return np.zeros(p.dim)
    if p.dim == 1:
        lo, hi = p.vertices.min(), p.vertices.max()
        return np.array([0.5 * (hi * hi - lo * lo)])
    S = _simplices(p)
    edges = S[:, 1:, :] - S[:, :1, :]
    vols = np.abs(np.linalg.det(edges)) / math.factorial(p.dim)
    centroids = S.mean(axis=1)
    return (vols[:, None] * centroids).sum(axis=0)


def point_distance(f: Polyhedron, x: np.ndarray) -> float:
    A, b = f.hrep
    nearest = _lp.project(np.asarray(A), np.asarray(b), x)
    if nearest is None:
        return math.inf
    return float(np.linalg.norm(nearest - np.asarray(x, dtype=float)))


def directed_distance(k: Polyhedron, f: Polyhedron) -> float:
    """max over x in k of the distance from x to f; the maximum sits at a vertex of k."""
    if not k.is_bounded:
        raise UnboundedInput("Directed distance needs a bounded first argument.")
    return max(point_distance(f, v) for v in k.vertices)


def hausdorff_distance(p: Polyhedron, q: Polyhedron) -> float:
    return max(directed_distance(p, q), directed_distance(q, p))


def box(lo, hi) -> Polyhedron:
    lo = np.atleast_1d(np.asarray(lo, dtype=float))
    hi = np.atleast_1d(np.asarray(hi, dtype=float))
    d = len(lo)
    eye = np.eye(d)
    return Polyhedron.from_hrep(np.vstack([eye, -eye]), np.concatenate([hi, -lo]), dim=d)


def sphere_directions(n: int, count: int) -> np.ndarray:
    """Deterministic unit directions: +-1 in 1D, a regular polygon in 2D, a Fibonacci lattice in 3D."""
    if n == 1:
        return np.array([[1.0], [-1.0]])
    if n == 2:
        angles = 2.0 * np.pi * np.arange(count) / count
        return np.column_stack([np.cos(angles), np.sin(angles)])
    if n == 3:
        i = np.arange(count) + 0.5
        z = 1.0 - 2.0 * i / count
        r = np.sqrt(1.0 - z * z)
        phi = np.pi * (1.0 + 5 ** 0.5) * i
        return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
    raise ValueError(f"No ball model for dimension {n}.")


def ball_polytope(n: int, facets: Optional[int] = None) -> Polyhedron:
    """
    Polytope circumscribed about the unit ball: facet normals from sphere_directions, offsets 1.

    Its inradius is 1; its circumradius is max_norm() (1/cos(pi/m) for the m-gon).
    """
    facets = settings.BALL_FACETS if facets is None else facets
    U = sphere_directions(n, facets)
    return Polyhedron.from_hrep(U, np.ones(len(U)), dim=n)


def mahler_product(p: Polyhedron) -> float:
    """vol(p) * vol(polar(p)) for a body with the origin in its interior."""
    if not p.is_bounded:
        raise UnboundedInput("Mahler product of an unbounded set.")
    if not p.is_full_dim or np.min(p.slack(np.zeros(p.dim))) <= p.tol:
        raise DegenerateBody("Mahler product needs the origin in the interior.")
    return volume(p) * volume(polar(p))
