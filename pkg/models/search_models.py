from typing import List, Literal, Optional

from pydantic import BaseModel, Field, model_validator

from models.function_models import FunctionModel
from models.position_models import Normalization
from models.transform_models import TransformTag
from utils.config import settings

Symmetry = Literal["even", "centered"]
Parametrization = Literal["grid", "radial"]
Direction = Literal["max", "min"]


class FamilySpec(BaseModel):
    """
    A parametrized family of convex functions on a fixed set of knots.

    grid (n = 1): knots at R j / k. Even families mirror the values of j = 1..k; centered families carry
    separate values on both sides and rescale the left side so the centroid is the origin.
    radial (n = 2, even): a convex profile on [0, R] composed with the gauge of a regular polygon.

    Parameters are slope increments (one per knot interval, each >= 0), preceded by the value at the
    origin when anchor_origin is off.
    """
    n: int = Field(1, ge=1, le=2)
    symmetry: Symmetry = "even"
    parametrization: Parametrization = "grid"
    knots: int = Field(8, ge=1)
    domain_radius: float = Field(8.0, gt=0)
    extended: bool = False
    anchor_origin: bool = True
    ball_facets: int = Field(16, ge=3)
    value_box: float = Field(8.0, gt=0)

    @model_validator(mode='after')
    def _check_combination(self) -> 'FamilySpec':
        if self.parametrization == "grid" and self.n != 1:
            raise ValueError("Grid families are one-dimensional; use the radial family in the plane.")
        if self.parametrization == "radial" and (self.n != 2 or self.symmetry != "even"):
            raise ValueError("Radial families are even families in the plane.")
        return self

    @property
    def param_count(self) -> int:
        count = 2 * self.knots if self.symmetry == "centered" else self.knots
        return count + (0 if self.anchor_origin else 1)

    @property
    def step(self) -> float:
        return self.domain_radius / self.knots


class Objective(BaseModel):
    functional: TransformTag
    direction: Direction = "max"


class SearchConfig(BaseModel):
    seed: int = 0
    restarts: int = Field(default_factory=lambda: settings.SEARCH_RESTARTS, ge=1)
    max_iters: int = Field(default_factory=lambda: settings.SEARCH_MAX_ITERS, ge=1)
    oracle: bool = False
    oracle_resolution: int = Field(default_factory=lambda: settings.ORACLE_RESOLUTION, ge=2)
    oracle_refine: bool = True


class OracleRecord(BaseModel):
    oracle_value: Optional[float] = None
    oracle_params: List[float]
    gap: Optional[float] = None
    evaluated: int = 0
    refine_rounds: int = 0
    final_step: Optional[float] = None


class SearchResult(BaseModel):
    spec: FamilySpec
    objective: Objective
    best_params: List[float]
    best_values: List[float]
    best_function: Optional[FunctionModel] = None
    normalization: Optional[Normalization] = None
    value: Optional[float] = None
    trace: List[float]
    oracle: Optional[OracleRecord] = None
    seed: int
    entropy: int
