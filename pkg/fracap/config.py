"""Library Configuration.

Settings loaded from environment variables, a `.env` file and an optional YAML
config file with pydantic-settings.
"""

from __future__ import annotations

from functools import lru_cache
from pathlib import Path

from pydantic import Field
from pydantic_settings import (
    BaseSettings,
    PydanticBaseSettingsSource,
    SettingsConfigDict,
    YamlConfigSettingsSource,
)

# Default config file locations (later entries override earlier ones)
CONFIG_PATHS = [
    Path.home() / ".fracap" / "config.yaml",
    Path.cwd() / ".fracap.yaml",
]


class Settings(BaseSettings):
    """Numerical defaults and logging level."""

    model_config = SettingsConfigDict(
        env_prefix="FRACAP_",
        env_file=".env",
        env_file_encoding="utf-8",
        yaml_file=CONFIG_PATHS,
        extra="ignore",
    )

    log_level: str = "WARNING"

    # Projected gradient
    max_iterations: int = Field(default=50_000, ge=1)
    gradient_tolerance: float = Field(default=1e-8, gt=0)
    decrease_tolerance: float = Field(default=1e-10, gt=0)
    kkt_tolerance: float = Field(default=1e-6, gt=0)
    armijo_shrink: float = Field(default=0.5, gt=0, lt=1)
    armijo_slope: float = Field(default=1e-4, gt=0, lt=1)

    # Luxembourg bisection
    bisection_relative_width: float = Field(default=1e-10, gt=0)
    norm_residual_tolerance: float = Field(default=1e-8, gt=0)

    # Exponent bound sampling (lattice points per axis)
    bound_samples: int = Field(default=65, ge=2)

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        # Environment beats the YAML file
        return (
            init_settings,
            env_settings,
            dotenv_settings,
            YamlConfigSettingsSource(settings_cls),
        )


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
