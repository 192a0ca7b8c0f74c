from typing import Optional, Tuple

from pydantic import model_validator
from pydantic_settings import BaseSettings

MODES = ("exact", "numeric", "auto")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class Settings(BaseSettings):

    tol: float = 1e-9
    points: int = 20
    seed: int = 0
    mode: str = "auto"

    rank_points: int = 10
    rank_thresholds: Tuple[float, ...] = (1e-6, 1e-8, 1e-10)

    report_path: Optional[str] = None
    log_level: str = "WARNING"
    workers: int = 1

    class Config:
        env_file = ".env"
        env_prefix = "HOLOQUOT_"
        case_sensitive = False
        extra = "ignore"

    @model_validator(mode="after")
    def validate_run_options(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.points < 1 or self.rank_points < 1:
            raise ValueError("points and rank_points must be at least 1")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {', '.join(MODES)}, got {self.mode!r}")
        if self.log_level.upper() not in LOG_LEVELS:
            raise ValueError(f"unknown log level {self.log_level!r}")
        if not self.rank_thresholds:
            raise ValueError("rank_thresholds must not be empty")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        return self


settings = Settings()
