import logging
import math
from typing import Optional, Tuple

import numpy as np

from logic.classify import se_margins, shifted_ball_margins
from logic.exceptions import NotCentered, NotEven, NotGeometric, NotIntegrable
from logic.function import PolyhedralConvexFunction, add_constant, compose_linear
from logic.integration import exp_integral
from logic.john import john_ellipsoid
from logic.polyhedron import Polyhedron
from models.measure_models import MassResult
from models.position_models import Normalization, TargetClass
from utils.config import settings

logger = logging.getLogger(__name__)

Normalized = Tuple[Normalization, PolyhedralConvexFunction]


def _require_mass(phi: PolyhedralConvexFunction, mass: Optional[MassResult]) -> MassResult:
    mass = exp_integral(phi) if mass is None else mass
    if not mass.is_finite:
        raise NotIntegrable(f"Normalization needs finite positive mass, got {mass.kind}.")
    return mass


def _require_centered(mass: MassResult):
    c = mass.centroid
    if float(np.linalg.norm(c)) > settings.CENT_TOL:
        raise NotCentered(f"Centroid {c} is not the origin.")


def householder(c: np.ndarray) -> np.ndarray:
    """Orthogonal O with O c = |c| e_1; the identity when c already lies on the positive e_1 axis."""
    n = len(c)
    v = np.asarray(c, dtype=float).copy()
    v[0] -= np.linalg.norm(c)
    norm = np.linalg.norm(v)
    if norm <= settings.TOL:
        return np.eye(n)
    v /= norm
    return np.eye(n) - 2.0 * np.outer(v, v)


def _whitening(K: Polyhedron) -> Tuple[np.ndarray, np.ndarray]:
    """T0 = E^-1 for the John ellipsoid center + E B of K, and the center."""
    ellipsoid = john_ellipsoid(K)
    return np.linalg.inv(ellipsoid.root), ellipsoid.center_vector


def _finish(phi: PolyhedralConvexFunction, linear: np.ndarray, rotation: np.ndarray, vshift: float,
            witness_t: Optional[float], target: TargetClass, level: float) -> Normalized:
    M = rotation @ linear
    result = compose_linear(phi, np.linalg.inv(M))
    G = result.level_set(level)
    if target == "S_e":
        margins = se_margins(G)
    else:
        _, margins = shifted_ball_margins(G)
    near = min(margins) < settings.TOL
    if near:
        logger.warning(f"Normalization into {target} is near the class boundary: margins {margins}.")
    cert = Normalization(
        linear=linear.tolist(),
        rotation=rotation.tolist(),
        vshift=vshift,
        witness_t=witness_t,
        target_class=target,
        margins=margins,
        near_boundary=near
    )
    return cert, result


def normalize_even(phi: PolyhedralConvexFunction, mass: Optional[MassResult] = None) -> Normalized:
    """
    Bring an even geometric function into S_e: B/sqrt(n) within G(1) within B.

    The John ellipsoid of G(1) is centered at 0; mapping it to the ball gives B in T0 G(1) within sqrt(n) B,
    and the measured inner and outer radii pick the scaling at the geometric middle of the feasible range.
    """
    if not phi.is_even():
        raise NotEven("normalize_even needs an even function.")
    if not phi.is_geometric():
        raise NotGeometric("normalize_even needs a geometric function.")
    _require_mass(phi, mass)
    n = phi.n
    K = phi.level_set(1.0)
    T0, _ = _whitening(K)
    K0 = K.linear_image(T0)
    _, b = K0.hrep
    r_in = float(b.min())
    r_out = K0.max_norm()
    sigma = 1.0 / math.sqrt(math.sqrt(n) * r_in * r_out)
    logger.debug(f"S_e scaling: r_in={r_in:.6g}, r_out={r_out:.6g}, sigma={sigma:.6g}")
    return _finish(phi, sigma * T0, np.eye(n), 0.0, None, "S_e", 1.0)


def _shifted_position(K: Polyhedron) -> Tuple[np.ndarray, np.ndarray, float]:
    """
    Linear map, rotation and witness t placing t e_1 + B within sigma O T0 K within 2n B.

    Requires 0 in K, which bounds |T0 a| by n.
    """
    n = K.dim
    T0, a = _whitening(K)
    c = T0 @ a
    t0 = float(np.linalg.norm(c))
    O = householder(c)
    K1 = K.linear_image(O @ T0)
    A, b = K1.hrep
    center = np.zeros(n)
    center[0] = t0
    r_in = float(np.min(b - A @ center))
    r_out = K1.max_norm()
    lo = 1.0 / r_in
    hi = 2.0 * n / r_out
    if t0 > settings.TOL:
        hi = min(hi, n / t0)
    sigma = math.sqrt(lo * hi) if hi >= lo else lo
    if hi < lo:
        logger.warning(f"Empty scaling range [{lo:.6g}, {hi:.6g}]; using the inner bound.")
    return sigma * T0, O, sigma * t0


def normalize_centered(phi: PolyhedralConvexFunction, mass: Optional[MassResult] = None) -> Normalized:
    """Bring a geometric function with centroid 0 into S_1c: t e_1 + B within G(1) within 2n B."""
    if not phi.is_geometric():
        raise NotGeometric("normalize_centered needs a geometric function.")
    _require_centered(_require_mass(phi, mass))
    linear, rotation, t = _shifted_position(phi.level_set(1.0))
    return _finish(phi, linear, rotation, 0.0, t, "S_1c", 1.0)


def normalize_general(phi: PolyhedralConvexFunction, mass: Optional[MassResult] = None) -> Normalized:
    """
    Bring a function with centroid 0 into S_2: shift so inf = 0, then place G(2n) as in S_1c.

    After the shift 0 <= phi(0) <= n holds by Fradelizi's inequality, so the origin lies in G(2n).
    """
    _require_centered(_require_mass(phi, mass))
    n = phi.n
    vshift = phi.infimum
    shifted = add_constant(phi, -vshift)
    linear, rotation, t = _shifted_position(shifted.level_set(2.0 * n))
    return _finish(shifted, linear, rotation, vshift, t, "S_2", 2.0 * n)
