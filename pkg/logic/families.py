import logging
import math
from typing import Tuple

import numpy as np
from scipy.optimize import brentq

from logic.exceptions import CvxLabError, ImproperInput
from logic.function import PolyhedralConvexFunction
from logic.geometry import ball_polytope, box, sphere_directions
from logic.integration import centroid
from models.search_models import FamilySpec

logger = logging.getLogger(__name__)

# log-range of the left-side scale searched by the centroid correction
_LOG_SCALE_RANGE = (math.log(1e-3), math.log(1e3))


def knot_abscissae(spec: FamilySpec) -> np.ndarray:
    """Knots of the profile: 0, h, ..., R for even and radial families; -R, ..., R for centered ones."""
    h = spec.step
    if spec.symmetry == "centered":
        return h * np.arange(-spec.knots, spec.knots + 1)
    return h * np.arange(spec.knots + 1)


def default_params(spec: FamilySpec) -> np.ndarray:
    """Increments whose knot values interpolate x^2/2."""
    h = spec.step
    half = np.full(spec.knots, h)
    half[0] = 0.5 * h
    params = np.concatenate([half, half]) if spec.symmetry == "centered" else half
    if not spec.anchor_origin:
        params = np.r_[0.0, params]
    return params


def split_params(spec: FamilySpec, params) -> Tuple[float, np.ndarray, np.ndarray]:
    """(value at 0, right increments, left increments); left is empty unless the family is centered."""
    params = np.asarray(params, dtype=float).reshape(-1)
    if len(params) != spec.param_count:
        raise ImproperInput(f"Expected {spec.param_count} parameters, got {len(params)}.")
    if not np.all(np.isfinite(params)):
        raise ImproperInput("Parameters must be finite.")
    v0 = 0.0
    if not spec.anchor_origin:
        v0, params = float(params[0]), params[1:]
    k = spec.knots
    right, left = params[:k], params[k:]
    if np.any(params < -1e-12):
        raise ImproperInput("Negative slope increment: the values are not convex.")
    return v0, np.maximum(right, 0.0), np.maximum(left, 0.0)


def _half_values(v0: float, increments: np.ndarray, h: float) -> np.ndarray:
    """Values at 0, h, ..., kh for slopes cumsum(increments) on successive intervals."""
    return v0 + h * np.concatenate([[0.0], np.cumsum(np.cumsum(increments))])


def values_are_convex(x: np.ndarray, v: np.ndarray, tol: float = 1e-12) -> bool:
    """Discrete convexity: slopes of consecutive secants never decrease."""
    slopes = np.diff(v) / np.diff(x)
    return bool(np.all(np.diff(slopes) >= -tol * max(1.0, float(np.abs(slopes).max(initial=0.0)))))


def interpolant(x: np.ndarray, v: np.ndarray, extended: bool) -> PolyhedralConvexFunction:
    """Piecewise-linear interpolant of convex knot data as the max of its secants."""
    slopes = np.diff(v) / np.diff(x)
    intercepts = v[1:] - slopes * x[1:]
    domain = None if extended else box([x[0]], [x[-1]])
    return PolyhedralConvexFunction(1, slopes[:, None], intercepts, domain=domain,
                                    meta={"name": "grid family"})


def centered_values(spec: FamilySpec, v0: float, right: np.ndarray, left: np.ndarray, scale: float) -> np.ndarray:
    h = spec.step
    right_values = _half_values(v0, right, h)
    left_values = v0 + scale * (_half_values(v0, left, h) - v0)
    return np.concatenate([left_values[:0:-1], right_values])


def centering_scale(spec: FamilySpec, v0: float, right: np.ndarray, left: np.ndarray) -> float:
    """
    Scale of the left-side values that puts the centroid of the interpolant at the origin.

    Steeper left sides push mass to the right, so the centroid is monotone in the scale and a bracketing
    root finder on the log-scale is enough.

    Raises:
        ImproperInput: no scale in [1e-3, 1e3] centers the function.
    """
    x = knot_abscissae(spec)

    def offset(log_scale: float) -> float:
        v = centered_values(spec, v0, right, left, math.exp(log_scale))
        return float(centroid(interpolant(x, v, spec.extended))[0])

    lo, hi = _LOG_SCALE_RANGE
    f_lo, f_hi = offset(lo), offset(hi)
    if f_lo == 0.0:
        return math.exp(lo)
    if f_lo * f_hi > 0:
        raise ImproperInput("Centroid correction has no root in the scale range.")
    scale = math.exp(brentq(offset, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps))
    logger.debug(f"Centering scale of the left side: {scale:.6g}")
    return scale


def family_values(spec: FamilySpec, params) -> np.ndarray:
    """Knot values of the family member, after the centroid correction for centered families."""
    v0, right, left = split_params(spec, params)
    if spec.symmetry == "centered":
        return centered_values(spec, v0, right, left, centering_scale(spec, v0, right, left))
    return _half_values(v0, right, spec.step)


def family_function(spec: FamilySpec, params) -> PolyhedralConvexFunction:
    """
    Build the family member for a parameter vector.

    Raises:
        ImproperInput: wrong length, non-finite or negative increments, or no centering scale.
    """
    values = family_values(spec, params)
    x = knot_abscissae(spec)
    if spec.parametrization == "radial":
        return radial_function(x, values, spec.ball_facets, spec.extended)
    if spec.symmetry == "even":
        x = np.concatenate([-x[:0:-1], x])
        values = np.concatenate([values[:0:-1], values])
    return interpolant(x, values, spec.extended)


def radial_function(r: np.ndarray, values: np.ndarray, facets: int, extended: bool) -> PolyhedralConvexFunction:
    """profile(|x|_P) for the polygon P circumscribed about the unit disk and a convex nondecreasing profile."""
    U = sphere_directions(2, facets)
    slopes = np.diff(values) / np.diff(r)
    intercepts = values[1:] - slopes * r[1:]
    piece_slopes = (slopes[:, None, None] * U[None, :, :]).reshape(-1, 2)
    piece_intercepts = np.repeat(intercepts, len(U))
    domain = None if extended else ball_polytope(2, facets).scaled(r[-1])
    return PolyhedralConvexFunction(2, piece_slopes, piece_intercepts, domain=domain,
                                    meta={"name": "radial family"})


def is_feasible(spec: FamilySpec, params) -> bool:
    try:
        family_values(spec, params)
    except CvxLabError:
        return False
    return True
