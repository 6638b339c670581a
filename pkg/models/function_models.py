from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Field, model_validator

from models.geometry_models import Ellipsoid, PolyhedronModel


class AffinePiece(BaseModel):
    slope: List[float]
    intercept: float


class FunctionModel(BaseModel):
    """Function JSON: max of affine pieces on a polyhedral domain ("all" for R^n)."""
    n: int = Field(..., ge=1, le=3)
    pieces: List[AffinePiece] = Field(default_factory=list)
    domain: Union[Literal["all"], PolyhedronModel] = "all"
    meta: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode='after')
    def _check_dims(self) -> 'FunctionModel':
        for piece in self.pieces:
            if len(piece.slope) != self.n:
                raise ValueError(f"Piece slope has length {len(piece.slope)}, expected {self.n}.")
        if self.domain != "all" and self.domain.dim != self.n:
            raise ValueError(f"Domain dimension {self.domain.dim} does not match n = {self.n}.")
        return self


Integrability = Literal["finite", "infinite", "zero"]


class ClassTags(BaseModel):
    is_cvx0: bool
    is_even: bool
    zero_in_int_dom: bool
    integrable: Integrability
    centered: bool = False

    in_Se: bool = False
    in_S1: bool = False
    in_S1c: bool = False
    in_S2: bool = False

    # witnesses
    witness_t: Optional[float] = None
    witness_t_general: Optional[float] = None
    john: Optional[Ellipsoid] = None
    se_margins: Optional[List[float]] = None
    s1_margins: Optional[List[float]] = None
    s2_margins: Optional[List[float]] = None
