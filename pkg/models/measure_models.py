from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field, model_validator

from models.function_models import ClassTags, Integrability
from models.transform_models import TransformTag


class MassResult(BaseModel):
    """Trichotomy of the integral of exp(-phi): a finite positive value, +inf, or zero mass."""
    kind: Integrability
    value: Optional[float] = None
    moment: Optional[List[float]] = None

    @model_validator(mode='after')
    def _check_kind(self) -> 'MassResult':
        if self.kind == "finite" and (self.value is None or self.value <= 0):
            raise ValueError("A finite mass needs a positive value.")
        return self

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    @property
    def centroid(self) -> Optional[List[float]]:
        if not self.is_finite or self.moment is None:
            return None
        return [m / self.value for m in self.moment]


class BoundCheck(BaseModel):
    """One side of a product inequality: `applicable` is False when its constant is unknown or its hypothesis fails."""
    name: str
    bound: Optional[float] = None
    side: Literal["upper", "lower"]
    applicable: bool
    passed: Optional[bool] = None
    note: str = ""


class ProductReport(BaseModel):
    transform: TransformTag
    mass_primal: MassResult
    mass_dual: MassResult
    product: Optional[float] = None
    tags: Optional[ClassTags] = None
    bounds_check: List[BoundCheck] = Field(default_factory=list)
    reference: Dict[str, float] = Field(default_factory=dict)
    ratios: Dict[str, float] = Field(default_factory=dict)

    @property
    def is_defined(self) -> bool:
        return self.product is not None
