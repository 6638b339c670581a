from typing import Literal

from pydantic import BaseModel

TransformTag = Literal["L", "A", "J"]

TRANSFORM_NAMES = {"legendre": "L", "polarity": "A", "gauge": "J"}


class LevelSetComparison(BaseModel):
    """
    Compares {A phi <= 1/s} with {L phi <= s}/s, and places the latter between G(s)° and 2 G(s)°.

    A margin is nonnegative iff its containment holds; +inf or -inf when a set is the whole space or
    escapes along a ray.
    """
    s: float
    hausdorff: float
    inner_margin: float
    outer_margin: float
