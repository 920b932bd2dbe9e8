"""
Bipartite Connectivity Toolkit - Configuration
Numerical budgets, Monte Carlo layout and regime thresholds, all overridable from the environment.
"""

import logging
from functools import lru_cache

from dotenv import load_dotenv
from pydantic import field_validator, model_validator
from pydantic_settings import BaseSettings


load_dotenv()


class Settings(BaseSettings):
    """Toolkit configuration with Environment Variable priority."""

    # Identity
    APP_NAME: str = "bipconn"
    APP_VERSION: str = "1.0.0"
    APP_DESCRIPTION: str = "Connectivity probability of random bipartite graphs G(n,m,p)"

    # Logging & Monitoring
    LOG_LEVEL: str = "INFO"
    LOG_FORMAT: str = "%(asctime)s | %(levelname)s | %(name)s | %(message)s"
    SENTRY_DSN: str = ""

    # Exhaustive oracle
    BRUTE_MAX_EDGES: int = 24
    BRUTE_CHUNK_BITS: int = 20

    # Lattice DPs (bound on n*m)
    DP_STATE_BUDGET: int = 4_000_000

    # Monte Carlo
    MC_BLOCK_SIZE: int = 4096
    WORKERS: int = 1
    WALK_TAIL_MASS: float = 1e-12

    # Regime classification thresholds
    REGIME_DENSE_FACTOR: float = 3.0
    REGIME_R2_LOWER: float = 0.1
    REGIME_R3_SCORE: float = 5.0
    REGIME_TINY: float = 0.1
    REGIME_ASPECT_TOLERANCE: float = 0.25

    # Cross-route agreement
    EXACT_AGREEMENT_TOLERANCE: float = 1e-9

    @field_validator("LOG_LEVEL")
    @classmethod
    def check_log_level(cls, v: str) -> str:
        level = v.strip().upper()
        level_names = logging.getLevelNamesMapping() if hasattr(logging, "getLevelNamesMapping") else logging._nameToLevel
        if level not in level_names:
            raise ValueError(f"LOG_LEVEL must be a logging level name, got {v!r}")
        return level

    @field_validator("BRUTE_MAX_EDGES", "BRUTE_CHUNK_BITS", "DP_STATE_BUDGET", "MC_BLOCK_SIZE", "WORKERS")
    @classmethod
    def check_positive(cls, v: int) -> int:
        if v <= 0:
            raise ValueError("budgets, block sizes and worker counts must be positive")
        return v

    @field_validator("BRUTE_MAX_EDGES")
    @classmethod
    def check_brute_bound(cls, v: int) -> int:
        # rows are decoded from one 64-bit subset index
        if v > 62:
            raise ValueError("BRUTE_MAX_EDGES cannot exceed 62")
        return v

    @field_validator("WALK_TAIL_MASS")
    @classmethod
    def check_tail_mass(cls, v: float) -> float:
        if not 0.0 < v < 1e-3:
            raise ValueError("WALK_TAIL_MASS must lie in (0, 1e-3)")
        return v

    @model_validator(mode="after")
    def check_regime_thresholds(self) -> "Settings":
        if self.REGIME_R2_LOWER <= 0 or self.REGIME_TINY <= 0 or self.REGIME_R3_SCORE <= 0:
            raise ValueError("regime thresholds must be positive")
        if self.REGIME_DENSE_FACTOR <= 0 or self.REGIME_ASPECT_TOLERANCE <= 0:
            raise ValueError("REGIME_DENSE_FACTOR and REGIME_ASPECT_TOLERANCE must be positive")
        return self

    class Config:
        env_file = ".env"
        case_sensitive = True


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
