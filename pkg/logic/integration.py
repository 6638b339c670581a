import logging
import math
from typing import Optional, Tuple

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.special import gamma, gammainc

from logic import geometry
from logic.exceptions import NotIntegrable
from logic.function import PolyhedralConvexFunction
from models.measure_models import MassResult

logger = logging.getLogger(__name__)


def _chebyshev_nodes(count: int) -> np.ndarray:
    """Chebyshev points of the first kind mapped to the open interval (0, 1)."""
    k = np.arange(count)
    return 0.5 - 0.5 * np.cos((2 * k + 1) * np.pi / (2 * count))


def _distinct_heights(heights: np.ndarray, tol: float) -> np.ndarray:
    h = np.sort(heights)
    keep = [h[0]]
    for value in h[1:]:
        if value - keep[-1] > tol * max(1.0, abs(value)):
            keep.append(value)
    return np.asarray(keep)


def _slice_data(phi: PolyhedralConvexFunction, t: float) -> Tuple[float, np.ndarray]:
    G = phi.level_set(t)
    if G.affine_dim < phi.n:
        return 0.0, np.zeros(phi.n)
    return geometry.volume(G), geometry.moment(G)


def _fit(phi: PolyhedralConvexFunction, t0: float, width: float, nodes: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Coefficients, lowest degree first, of vol(G(t0 + width u)) and of each moment coordinate in u."""
    vols = np.empty(len(nodes))
    moms = np.empty((len(nodes), phi.n))
    for i, u in enumerate(nodes):
        vols[i], moms[i] = _slice_data(phi, t0 + width * u)
    deg = phi.n + 1
    return P.polyfit(nodes, vols, deg), P.polyfit(nodes, moms, deg)


def _lower_gamma_weights(deg: int, L: float) -> np.ndarray:
    """w_j = L^-j * gamma_lower(j + 1, L), so that the integral over [0, L] of e^-s (s/L)^j ds is w_j."""
    j = np.arange(deg + 1)
    return gammainc(j + 1, L) * gamma(j + 1) / np.power(L, j)


def exp_integral(phi: PolyhedralConvexFunction, tol: Optional[float] = None) -> MassResult:
    """
    Integral of exp(-phi) and of x exp(-phi) over R^n by the layer-cake formula.

    Between consecutive vertex heights of the epigraph, the volume and the first moment of the level
    set G(t) are polynomials in t. Each is fitted at Chebyshev nodes inside the interval and integrated
    against exp(-t) with incomplete gamma functions. Past the highest vertex the same holds on
    [h_max, inf) and the tail integral reduces to factorials.

    Returns:
        MassResult with kind "zero" when the domain is lower-dimensional, "infinite" when a level set
        is unbounded, and otherwise the value and the moment.
    """
    tol = phi.tol if tol is None else tol
    if not phi.domain.is_full_dim:
        return MassResult(kind="zero")
    E = phi.epigraph
    rays = E.rays
    if len(rays):
        horizontal = np.linalg.norm(rays[:, :-1], axis=1) > tol
        if np.any(horizontal & (rays[:, -1] <= tol)):
            return MassResult(kind="infinite")

    n = phi.n
    heights = _distinct_heights(E.vertices[:, -1], tol)
    nodes = _chebyshev_nodes(n + 3)
    value = 0.0
    moment = np.zeros(n)
    for lo, hi in zip(heights[:-1], heights[1:]):
        L = hi - lo
        c_vol, c_mom = _fit(phi, lo, L, nodes)
        w = _lower_gamma_weights(len(c_vol) - 1, L)
        scale = math.exp(-lo)
        value += scale * float(c_vol @ w)
        moment += scale * (w @ c_mom)
        logger.debug(f"Layer [{lo:.6g}, {hi:.6g}]: running mass {value:.12g}")

    top = float(heights[-1])
    span = n + 2.0
    c_vol, c_mom = _fit(phi, top, span, nodes)
    # rescale u in [0, 1] back to s = span * u before the factorial moments
    powers = np.power(span, -np.arange(len(c_vol), dtype=float))
    factorials = gamma(np.arange(len(c_vol)) + 1.0)
    scale = math.exp(-top)
    value += scale * float((c_vol * powers) @ factorials)
    moment += scale * ((powers * factorials) @ c_mom)

    if not value > 0:
        logger.warning(f"Layer-cake integration returned a non-positive mass {value!r}.")
        return MassResult(kind="zero")
    return MassResult(kind="finite", value=float(value), moment=moment.tolist())


def centroid(phi: PolyhedralConvexFunction, mass: Optional[MassResult] = None) -> np.ndarray:
    """Barycenter of exp(-phi(x)) dx."""
    mass = exp_integral(phi) if mass is None else mass
    if not mass.is_finite:
        raise NotIntegrable(f"Centroid of a function with {mass.kind} mass.")
    return np.asarray(mass.moment) / mass.value
