from typing import Dict, List, Optional

from pydantic import BaseModel, Field


class RunManifest(BaseModel):
    """Provenance of one CLI invocation, written next to its outputs."""
    command: List[str]
    inputs: Dict[str, str] = Field(default_factory=dict, description="Input path -> sha256 of its bytes")
    version: str
    seed: Optional[int] = None
    started_at: str
    wall_time: float
    outputs: List[str] = Field(default_factory=list)
    exit_code: int = 0


class ErrorReport(BaseModel):
    error: str
    message: str
    command: str
