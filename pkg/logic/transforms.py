import logging
import math

import numpy as np

from logic.exceptions import ImproperInput, NotGeometric, UnboundedInput
from logic.function import PolyhedralConvexFunction, from_epigraph
from logic.geometry import hausdorff_distance, polar
from logic.polyhedron import Polyhedron
from models.transform_models import LevelSetComparison, TransformTag

logger = logging.getLogger(__name__)


def reflect(p: Polyhedron) -> Polyhedron:
    """Negate the last coordinate."""
    flip = np.eye(p.dim)
    flip[-1, -1] = -1.0
    return p.linear_image(flip)


def legendre(phi: PolyhedralConvexFunction) -> PolyhedralConvexFunction:
    """
    Convex conjugate y -> sup_x <x, y> - phi(x).

    Every vertex (v, h) of the epigraph gives the piece <v, y> - h; every recession direction (d, tau)
    bounds the domain by <d, y> <= tau.
    """
    E = phi.epigraph
    tol = phi.tol
    V, R = E.vertices, E.rays
    slopes = V[:, :-1]
    intercepts = -V[:, -1]
    rows = []
    offsets = []
    for d, tau in zip(R[:, :-1], R[:, -1]):
        if np.linalg.norm(d) <= tol:
            if tau < -tol:
                raise ImproperInput("Epigraph descends vertically; the function is not proper.")
            continue
        rows.append(d)
        offsets.append(tau)
    domain = None
    if rows:
        domain = Polyhedron.from_hrep(np.asarray(rows), np.asarray(offsets), dim=phi.n, tol=tol)
    name = phi.meta.get("name")
    meta = {"name": f"L({name})"} if name else {}
    return PolyhedralConvexFunction(phi.n, slopes, intercepts, domain=domain, meta=meta, tol=tol)


def polarity(phi: PolyhedralConvexFunction) -> PolyhedralConvexFunction:
    """The polarity transform: its epigraph is the reflection of the polar of epi(phi)."""
    if not phi.is_geometric():
        raise NotGeometric("Polarity transform needs phi >= 0 with phi(0) = 0.")
    name = phi.meta.get("name")
    meta = {"name": f"A({name})"} if name else {}
    return from_epigraph(reflect(polar(phi.epigraph)), meta=meta)


def gauge(phi: PolyhedralConvexFunction) -> PolyhedralConvexFunction:
    """J = L o A."""
    result = legendre(polarity(phi))
    name = phi.meta.get("name")
    result.meta = {"name": f"J({name})"} if name else {}
    return result


_TRANSFORMS = {"L": legendre, "A": polarity, "J": gauge}


def apply(phi: PolyhedralConvexFunction, tag: TransformTag) -> PolyhedralConvexFunction:
    try:
        transform = _TRANSFORMS[tag]
    except KeyError:
        raise ValueError(f"Unknown transform {tag!r}.")
    logger.debug(f"Applying {tag} to a function on R^{phi.n} with {len(phi.intercepts)} pieces")
    return transform(phi)


def _set_gap(p: Polyhedron, q: Polyhedron) -> float:
    try:
        return hausdorff_distance(p, q)
    except UnboundedInput:
        return 0.0 if p.equals(q) else math.inf


def level_set_comparison(phi: PolyhedralConvexFunction, s: float) -> LevelSetComparison:
    """
    Check {A phi <= 1/s} = {L phi <= s}/s and G(s)° within {L phi <= s}/s within 2 G(s)° for phi in Cvx_0.
    """
    if s <= 0:
        raise ValueError("Level must be positive.")
    A_level = polarity(phi).level_set(1.0 / s)
    L_level = legendre(phi).level_set(s).scaled(1.0 / s)
    G_polar = polar(phi.level_set(s))
    return LevelSetComparison(
        s=s,
        hausdorff=_set_gap(A_level, L_level),
        inner_margin=L_level.margin(G_polar),
        outer_margin=G_polar.scaled(2.0).margin(L_level)
    )
