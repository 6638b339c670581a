import logging
import math
from typing import Dict, List, Optional

import numpy as np

from logic.classify import classify
from logic.exceptions import IllPositioned, NotCentered, NotIntegrable
from logic.function import PolyhedralConvexFunction
from logic.integration import centroid, exp_integral
from logic.transforms import apply
from models.function_models import ClassTags
from models.measure_models import BoundCheck, MassResult, ProductReport
from models.transform_models import TransformTag
from utils.config import settings

logger = logging.getLogger(__name__)

__all__ = ["exp_integral", "centroid", "product", "fradelizi_check", "reference_constants", "ball_volume"]

_BOUND_RTOL = 1e-6


def ball_volume(n: int) -> float:
    """Volume w_n of the Euclidean unit ball in R^n."""
    return math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)


def reference_constants(n: int) -> Dict[str, float]:
    return {
        "gaussian_L": (2.0 * math.pi) ** n,
        "ball_A": (math.factorial(n) * ball_volume(n)) ** 2,
    }


def _check(name: str, value: Optional[float], bound: Optional[float], side: str, applicable: bool,
           note: str = "") -> BoundCheck:
    if not applicable or bound is None or value is None:
        return BoundCheck(name=name, bound=bound, side=side, applicable=False, note=note)
    if side == "upper":
        passed = value <= bound * (1.0 + _BOUND_RTOL)
    else:
        passed = value >= bound * (1.0 - _BOUND_RTOL)
    return BoundCheck(name=name, bound=bound, side=side, applicable=True, passed=passed, note=note)


def _bound_checks(tag: TransformTag, n: int, value: Optional[float], symmetric: bool) -> List[BoundCheck]:
    w = ball_volume(n)
    c, big_c, cn = settings.BOUND_C, settings.BOUND_BIG_C, settings.BOUND_CN
    if tag == "L":
        return [
            _check("santalo_upper", value, (2.0 * math.pi) ** n, "upper", symmetric,
                   "" if symmetric else "neither even nor centered"),
            _check("reverse_lower", value, None if c is None else (2.0 * math.pi / c) ** n, "lower", c is not None),
        ]
    if tag == "A":
        return [
            _check("lower", value, None if c is None else c ** n * w * w, "lower", c is not None),
            _check("upper", value, None if big_c is None else (math.factorial(n) * w) ** 2 * (1.0 + big_c / n),
                   "upper", big_c is not None),
        ]
    return [
        _check("lower", value, None if cn is None else 1.0 / cn, "lower", cn is not None),
        _check("upper", value, cn, "upper", cn is not None),
    ]


def product(phi: PolyhedralConvexFunction, tag: TransformTag, tags: Optional[ClassTags] = None,
            with_tags: bool = True) -> ProductReport:
    """
    P_T(phi): the product of the integrals of exp(-phi) and exp(-T phi), or their quotient for T = J.

    Args:
        phi: The function.
        tag: "L", "A" or "J".
        tags: Precomputed class tags; computed (without the John witness) when missing and with_tags is set.
        with_tags: Skip classification entirely when False.

    Raises:
        IllPositioned: 0 is not interior to dom phi, or phi is not geometric for A and J.
    """
    if not phi.zero_in_int_dom():
        raise IllPositioned(f"P_{tag} needs 0 in the interior of the domain.")
    if tag in ("A", "J") and not phi.is_geometric():
        raise IllPositioned(f"P_{tag} needs a geometric function.")

    primal = exp_integral(phi)
    dual = exp_integral(apply(phi, tag))
    value = None
    if primal.is_finite and dual.is_finite:
        value = primal.value / dual.value if tag == "J" else primal.value * dual.value
    logger.debug(f"P_{tag}: primal {primal.kind} {primal.value}, dual {dual.kind} {dual.value}")

    if tags is None and with_tags:
        tags = classify(phi, mass=primal, with_john=False)
    symmetric = phi.is_even() if tags is None else tags.is_even
    if not symmetric and primal.is_finite:
        symmetric = float(np.linalg.norm(primal.centroid)) <= settings.CENT_TOL

    reference = reference_constants(phi.n)
    ratios = {} if value is None else {k: value / v for k, v in reference.items()}
    return ProductReport(
        transform=tag,
        mass_primal=primal,
        mass_dual=dual,
        product=value,
        tags=tags,
        bounds_check=_bound_checks(tag, phi.n, value, symmetric),
        reference=reference,
        ratios=ratios
    )


def fradelizi_check(phi: PolyhedralConvexFunction, mass: Optional[MassResult] = None) -> bool:
    """sup exp(-phi) <= e^n exp(-phi(0)) for phi with centroid 0, within relative 1e-9."""
    mass = exp_integral(phi) if mass is None else mass
    if not mass.is_finite:
        raise NotIntegrable(f"Fradelizi check needs finite mass, got {mass.kind}.")
    if float(np.linalg.norm(mass.centroid)) > settings.CENT_TOL:
        raise NotCentered(f"Centroid {mass.centroid} is not the origin.")
    gap = phi.evaluate(np.zeros(phi.n)) - phi.infimum
    return gap <= phi.n + math.log1p(1e-9)
