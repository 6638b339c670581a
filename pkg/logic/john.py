import logging
from typing import Optional

import numpy as np

from clients.conic_client import ConicClient
from logic.exceptions import DegenerateBody, UnboundedInput
from logic.polyhedron import Polyhedron
from models.geometry_models import Ellipsoid
from utils.config import settings

logger = logging.getLogger(__name__)

_conic = ConicClient()


def john_ellipsoid(p: Polyhedron, tol: Optional[float] = None) -> Ellipsoid:
    """
    Maximum-volume ellipsoid inscribed in a bounded full-dimensional polytope.

    The polytope is centered and rescaled before the conic solve, and the solution is shrunk
    afterwards until every halfspace margin is nonnegative, so center + E is always inside p.

    Args:
        p: Bounded polyhedron with affine_dim == dim.
        tol: Tolerance of the outer sandwich check p within center + dim * E.

    Returns:
        The inscribed ellipsoid.

    Raises:
        DegenerateBody: p is lower-dimensional.
        UnboundedInput: p has recession rays.
    """
    tol = settings.JOHN_TOL if tol is None else tol
    if not p.is_bounded:
        raise UnboundedInput("John ellipsoid of an unbounded polyhedron.")
    if p.affine_dim < p.dim:
        raise DegenerateBody(f"John ellipsoid of a body with affine dimension {p.affine_dim} < {p.dim}.")

    V = p.vertices
    if p.dim == 1:
        lo, hi = float(V.min()), float(V.max())
        return Ellipsoid(center=[0.5 * (lo + hi)], shape=[[(0.5 * (hi - lo)) ** 2]])

    A, b = np.asarray(p.A), np.asarray(p.b)
    origin = V.mean(axis=0)
    scale = float(np.linalg.norm(V - origin, axis=1).max())
    b_scaled = (b - A @ origin) / scale
    B, c = _conic.max_volume_inscribed(A, b_scaled)
    B = scale * B
    center = origin + scale * c

    # shrink onto the feasible side
    reach = np.linalg.norm(A @ B, axis=1)
    room = b - A @ center
    if np.any(room <= 0):
        raise DegenerateBody("Ellipsoid center left the polytope.")
    factor = float(np.min(room / reach))
    if factor < 1.0:
        logger.debug(f"Shrinking solver ellipsoid by {factor:.3e}.")
        B = factor * B

    ellipsoid = Ellipsoid(center=center.tolist(), shape=(B @ B).tolist())
    spread = max(ellipsoid.gauge(v) for v in V)
    if spread > p.dim * (1.0 + tol):
        logger.warning(f"John sandwich violated: polytope reaches {spread:.6f} > {p.dim} in ellipsoid norm.")
    return ellipsoid
