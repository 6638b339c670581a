# utils/config.py
import json
from typing import List, Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_file='settings.env', env_file_encoding='utf-8',
                                      env_prefix='CVXLAB_', extra='ignore')

    # Tolerances
    TOL: float = 1e-9
    JOHN_TOL: float = 1e-6
    CENT_TOL: float = 1e-8

    # Polygonal ball model
    BALL_FACETS: int = 64

    # tau-topology diagnostics
    WINDOW_RADII_JSON: str = '[1, 2, 4, 8]'
    DIAG_THRESHOLD: float = 1e-3
    DIAG_BURN_IN: int = 2
    LEVEL_MARGIN: float = 1e-3

    # Extremizer search
    SEARCH_RESTARTS: int = 4
    SEARCH_MAX_ITERS: int = 400
    ORACLE_RESOLUTION: int = 11
    ORACLE_MIN_STEP: float = 1e-6
    ORACLE_MAX_ROUNDS: int = 200
    WORKERS: int = 4

    # Unknown universal constants of the product inequalities; None leaves that side informational.
    BOUND_C: Optional[float] = None
    BOUND_BIG_C: Optional[float] = None
    BOUND_CN: Optional[float] = None

    PLOT_LEVELS_JSON: str = '[0.5, 1, 2]'
    LOG_LEVEL: str = 'INFO'

    @property
    def WINDOW_RADII(self) -> List[float]:
        """Window radii of the epi-distance profile, parsed from the JSON string."""
        return [float(r) for r in json.loads(self.WINDOW_RADII_JSON)]

    @property
    def PLOT_LEVELS(self) -> List[float]:
        return [float(s) for s in json.loads(self.PLOT_LEVELS_JSON)]


settings = Settings()
