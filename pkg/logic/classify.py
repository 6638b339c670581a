import logging
import math
from typing import List, Optional, Tuple

import numpy as np

from clients.lp_client import LinearProgramClient
from logic.exceptions import CvxLabError
from logic.function import PolyhedralConvexFunction
from logic.integration import exp_integral
from logic.john import john_ellipsoid
from logic.polyhedron import Polyhedron
from models.function_models import ClassTags
from models.measure_models import MassResult
from utils.config import settings

logger = logging.getLogger(__name__)

_lp = LinearProgramClient()


def inner_ball_margin(K: Polyhedron, center: np.ndarray, radius: float) -> float:
    """min_i (b_i - <a_i, center>) - radius: nonnegative iff center + radius * B lies in K."""
    A, b = K.hrep
    if len(b) == 0:
        return math.inf
    return float(np.min(b - A @ center)) - radius


def outer_ball_margin(K: Polyhedron, radius: float) -> float:
    """radius - max |v| over K: nonnegative iff K lies in radius * B."""
    return radius - K.max_norm()


def se_margins(K: Polyhedron) -> List[float]:
    """Margins of B/sqrt(n) in K and of K in B."""
    n = K.dim
    return [inner_ball_margin(K, np.zeros(n), 1.0 / math.sqrt(n)), outer_ball_margin(K, 1.0)]


def best_shift(K: Polyhedron, t_max: float) -> Tuple[float, float]:
    """
    Maximize the margin of t e_1 + B inside K over t in [0, t_max].

    The margin min_i (b_i - t a_i1) - 1 is concave and piecewise linear in t, so one LP in (t, s) finds it.

    Returns:
        (t, margin); margin is +inf for the whole space.
    """
    A, b = K.hrep
    if len(b) == 0:
        return 0.0, math.inf
    # minimize -s  subject to  a_i1 t + s <= b_i - 1
    A_ub = np.column_stack([A[:, 0], np.ones(len(b))])
    res = _lp.minimize(np.array([0.0, -1.0]), A_ub, b - 1.0, bounds=[(0.0, t_max), (None, None)])
    if not res.is_optimal:
        return 0.0, -math.inf
    t, s = res.x
    return float(t), float(s)


def shifted_ball_margins(K: Polyhedron) -> Tuple[float, List[float]]:
    """Witness t and margins of t e_1 + B in K and of K in 2n B."""
    n = K.dim
    t, inner = best_shift(K, float(n))
    return t, [inner, outer_ball_margin(K, 2.0 * n)]


def classify(phi: PolyhedralConvexFunction, mass: Optional[MassResult] = None, with_john: bool = True,
             tol: Optional[float] = None) -> ClassTags:
    """
    Compute every class flag of phi by exact containment tests.

    Args:
        phi: The function.
        mass: Precomputed exp_integral(phi), if available.
        with_john: Also record the John ellipsoid of G(1) as a witness.
        tol: Margin tolerance; defaults to settings.TOL.
    """
    tol = settings.TOL if tol is None else tol
    n = phi.n
    mass = exp_integral(phi) if mass is None else mass
    is_cvx0 = phi.is_geometric()
    tags = ClassTags(
        is_cvx0=is_cvx0,
        is_even=phi.is_even(),
        zero_in_int_dom=phi.zero_in_int_dom(),
        integrable=mass.kind
    )
    if mass.is_finite:
        tags.centered = float(np.linalg.norm(mass.centroid)) <= settings.CENT_TOL

    if is_cvx0:
        G1 = phi.level_set(1.0)
        tags.se_margins = se_margins(G1)
        tags.in_Se = tags.is_even and min(tags.se_margins) >= -tol
        tags.witness_t, tags.s1_margins = shifted_ball_margins(G1)
        tags.in_S1 = min(tags.s1_margins) >= -tol
        tags.in_S1c = tags.in_S1 and tags.centered
        if with_john and G1.is_bounded and G1.is_full_dim:
            try:
                tags.john = john_ellipsoid(G1)
            except CvxLabError as e:
                logger.warning(f"No John ellipsoid witness: {e}")

    inf = phi.infimum
    value_at_zero = phi.evaluate(np.zeros(n))
    if math.isfinite(inf) and abs(inf) <= tol and -tol <= value_at_zero <= n + tol:
        G = phi.level_set(2.0 * n)
        tags.witness_t_general, tags.s2_margins = shifted_ball_margins(G)
        tags.in_S2 = min(tags.s2_margins) >= -tol
    return tags
