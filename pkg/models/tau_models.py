from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field, field_validator

from models.transform_models import TransformTag
from utils.config import settings

Verdict = Literal["monotone-decreasing", "below-threshold", "failed"]

DIAGNOSTICS = ("epi", "level", "pointwise", "mass", "centroid")


class EpiDistanceProfile(BaseModel):
    """Hausdorff distance of the two epigraphs cut to the window [-R, R]^{n+1}, for each radius R."""
    window_radii: List[float]
    distances: List[float]

    @property
    def sup(self) -> float:
        return max(self.distances)


class TermRecord(BaseModel):
    index: int
    epi: EpiDistanceProfile
    level_gaps: Dict[str, float] = Field(default_factory=dict)
    pointwise_gap: float
    mass_gap: float
    centroid_gap: float
    transform_gaps: Dict[str, float] = Field(default_factory=dict)

    def series_value(self, name: str) -> float:
        if name == "epi":
            return self.epi.sup
        if name == "level":
            return max(self.level_gaps.values(), default=0.0)
        if name == "pointwise":
            return self.pointwise_gap
        if name == "mass":
            return self.mass_gap
        if name == "centroid":
            return self.centroid_gap
        return self.transform_gaps[name]


class DiagnoseConfig(BaseModel):
    radii: List[float] = Field(default_factory=lambda: settings.WINDOW_RADII)
    threshold: float = settings.DIAG_THRESHOLD
    burn_in: int = settings.DIAG_BURN_IN
    level_margin: float = settings.LEVEL_MARGIN
    levels: List[float] = Field(default_factory=lambda: [1.0])
    lattice_step: float = 0.125
    lattice_radius: float = 2.0
    diagnostics: List[str] = Field(default_factory=lambda: list(DIAGNOSTICS))
    transforms: List[TransformTag] = Field(default_factory=lambda: ["L", "A", "J"])

    @field_validator('radii')
    @classmethod
    def _increasing(cls, radii: List[float]) -> List[float]:
        if not radii or radii[0] <= 0 or any(b <= a for a, b in zip(radii, radii[1:])):
            raise ValueError("Window radii must be positive and increasing.")
        return radii


class ConvergenceReport(BaseModel):
    terms: List[TermRecord]
    verdicts: Dict[str, Verdict]
    kappa: Dict[str, Optional[float]] = Field(default_factory=dict)
    skipped_levels: List[float] = Field(default_factory=list)
    passed: bool
