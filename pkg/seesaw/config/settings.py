"""
Type-safe configuration management using Pydantic Settings.

This module provides centralized configuration with environment variable loading,
validation, and type safety for the analysis, simulation and CLI defaults.
"""

import json
from typing import List, Literal, Optional

from pydantic import Field, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Application configuration with type-safe settings.

    All settings can be overridden via environment variables prefixed with
    SEESAW_ (e.g. SEESAW_DEFAULT_SEED=7) or a local .env file.
    """

    # Logging configuration
    log_level: str = Field(default="INFO", description="Logging level")
    log_config_path: str = Field(
        default="seesaw/config/logging.yaml",
        description="Logging YAML, relative to the project root"
    )
    log_dir: str = Field(default="logs", description="Directory for rotating log files")
    log_to_file: bool = Field(
        default=False,
        description="Attach the rotating plain and JSON file handlers"
    )

    # Simulation defaults
    default_seed: int = Field(
        default=20240607,
        ge=0,
        lt=2**64,
        description="Seed used when a run does not supply one"
    )
    default_horizon: int = Field(
        default=1_000_000,
        ge=1,
        description="Periods per replication when --horizon is omitted"
    )
    simulation_chunk_size: int = Field(
        default=262_144,
        ge=1_024,
        description="Periods drawn per vectorised chunk"
    )
    simulation_workers: int = Field(
        default=4,
        ge=1,
        le=64,
        description="Threads used to run batch replications"
    )
    t_sampler_scaling: Literal["scale", "covariance"] = Field(
        default="scale",
        description="Bivariate-t draws use Sigma as scale matrix or as covariance"
    )

    # Numeric maximizer
    argmax_tolerance: float = Field(
        default=1e-10,
        gt=0,
        description="Bracket width at which golden-section search stops"
    )
    argmax_max_iter: int = Field(default=500, ge=10, description="Golden-section iteration cap")

    # Figure-2 grid
    figure2_alpha_start: float = Field(default=0.05, gt=0, description="First alpha on the grid")
    figure2_alpha_stop: float = Field(default=3.0, gt=0, description="Last alpha on the grid")
    figure2_alpha_step: float = Field(default=0.05, gt=0, description="Alpha grid spacing")
    figure2_deltas: List[float] = Field(
        default=[2.5, 3.0, 5.0, 10.0, 30.0],
        description="Degrees of freedom plotted against the normal limit"
    )

    # Output
    output_format: Literal["table", "json", "csv"] = Field(
        default="table",
        description="Default CLI output format"
    )

    model_config = SettingsConfigDict(
        env_prefix="SEESAW_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore"
    )

    @field_validator('figure2_deltas', mode='before')
    @classmethod
    def parse_delta_list(cls, v):
        """Parse delta list from comma-separated string or JSON array."""
        if isinstance(v, str):
            if v.strip().startswith('['):
                return json.loads(v)
            return [float(item.strip()) for item in v.split(',') if item.strip()]
        return v

    @field_validator('figure2_deltas')
    @classmethod
    def validate_deltas(cls, v):
        """Every plotted delta needs a finite variance."""
        bad = [d for d in v if d <= 2]
        if bad:
            raise ValueError(f"figure2 deltas must exceed 2, got {bad}")
        return v

    @field_validator('log_level')
    @classmethod
    def validate_log_level(cls, v):
        """Normalise and check the logging level name."""
        level = v.upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"Invalid log level: {v}")
        return level

    @model_validator(mode='after')
    def validate_alpha_grid(self):
        """The alpha grid must run upwards."""
        if self.figure2_alpha_stop < self.figure2_alpha_start:
            raise ValueError(
                f"figure2 alpha stop {self.figure2_alpha_stop} is below start {self.figure2_alpha_start}"
            )
        return self

    def with_alpha_grid(self, **overrides: Optional[float]) -> "Settings":
        """
        Copy of these settings with a validated replacement alpha grid.

        Args:
            **overrides: Replacement figure2_alpha_* values; None keeps the current value

        Returns:
            New Settings instance

        Raises:
            pydantic.ValidationError: If the resulting grid is empty or has a non-positive bound or step
        """
        data = self.model_dump()
        data.update({key: value for key, value in overrides.items() if value is not None})
        return self.__class__.model_validate(data)

    def figure2_alphas(self) -> List[float]:
        """
        Expand the configured alpha grid.

        Returns:
            Alpha values from start to stop inclusive
        """
        count = int(round((self.figure2_alpha_stop - self.figure2_alpha_start) / self.figure2_alpha_step))
        return [round(self.figure2_alpha_start + i * self.figure2_alpha_step, 12) for i in range(count + 1)]


# Global settings instance
settings = Settings()
