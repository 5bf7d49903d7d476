# geoscale/core/config.py
from pathlib import Path
from typing import List, Optional, Union

from dotenv import dotenv_values
from pydantic import Field, ValidationError, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from geoscale.core.exceptions import InputError


def parse_int_list(text: str) -> List[int]:
    """Parse "2,4,8" into [2, 4, 8]"""
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ValueError(f"expected comma-separated integers, got {text!r}")


class Settings(BaseSettings):
    # Classification
    HEAD_LIMIT: float = Field(0.4, gt=0, lt=1)

    # Street topology
    ANGLE_THRESHOLD: float = Field(45.0, gt=0, lt=90)
    STRATEGY: str = "every-best-fit"
    SNAP_FACTOR: float = Field(1e-9, gt=0)
    SNAP_TOLERANCE: Optional[float] = Field(None, gt=0)

    # Terrain
    HIST_WIDTH: float = Field(1.0, gt=0)
    COARSEN_FACTORS: str = "2,4,8"
    SEED: int = 0

    # Fractal measurement
    MAX_KOCH_ITERATIONS: int = Field(12, ge=0)
    WORKERS: int = Field(1, ge=1)

    # Output
    LOG_LEVEL: str = "WARNING"
    PLOT_WIDTH: int = 800
    PLOT_HEIGHT: int = 600

    model_config = SettingsConfigDict(
        env_prefix="GEOSCALE_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="forbid",
    )

    @field_validator("COARSEN_FACTORS")
    @classmethod
    def check_factors(cls, v):
        parse_int_list(v)
        return v

    @property
    def coarsen_factors(self) -> List[int]:
        return parse_int_list(self.COARSEN_FACTORS)

    @field_validator("STRATEGY")
    @classmethod
    def known_strategy(cls, v):
        if v not in ("every-best-fit", "self-best-fit", "same-name"):
            raise ValueError(f"unknown strategy: {v}")
        return v


def load_settings(config_path: Optional[Union[str, Path]] = None) -> Settings:
    """
    Build settings from defaults, environment and an optional key=value file.

    The file is read with python-dotenv: one KEY=value per line, '#' comments,
    keys case-insensitive. File values take precedence over the environment.
    """
    overrides = {}
    if config_path is not None:
        path = Path(config_path)
        if not path.is_file():
            raise InputError(f"config file not found: {path}")
        for key, value in dotenv_values(path).items():
            if value is None:
                raise InputError(f"config key without value: {key}")
            overrides[key.strip().upper()] = value

    try:
        return Settings(**overrides)
    except ValidationError as e:
        raise InputError(f"invalid configuration: {e}") from e


# Create settings instance
settings = Settings()


def apply_settings(new: Settings) -> Settings:
    """Copy new values onto the shared settings instance imported across the package"""
    for name in Settings.model_fields:
        setattr(settings, name, getattr(new, name))
    return settings
