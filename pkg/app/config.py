"""
Centralized Configuration Management for Schinzel Lab.
Uses Pydantic for validation and type safety.
"""

from typing import Optional, Dict, Any
from pathlib import Path
from pydantic import Field, AliasChoices, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict
from functools import lru_cache

from app.constants import (
    DEFAULT_ORDER_BOUND,
    DEFAULT_BRUTE_FORCE_DEGREE,
    DEFAULT_MAX_DEGREE,
    MAX_DEGREE_GUARD,
    DEFAULT_CACHE_DIR,
    DEFAULT_REPORTS_DIR,
)


class GroupEngineSettings(BaseSettings):
    """Bounds that keep group computations at desk scale."""
    model_config = SettingsConfigDict(env_file=".env", extra="ignore")

    order_bound: int = Field(
        default=DEFAULT_ORDER_BOUND,
        ge=1,
        validation_alias=AliasChoices("SCHINZEL_ORDER_BOUND", "schinzel_order_bound"),
    )
    brute_force_degree: int = Field(
        default=DEFAULT_BRUTE_FORCE_DEGREE,
        ge=1,
        le=10,
        validation_alias=AliasChoices("SCHINZEL_BRUTE_FORCE_DEGREE", "schinzel_brute_force_degree"),
    )


class SearchSettings(BaseSettings):
    """Search, parallelism and cache configuration."""
    model_config = SettingsConfigDict(env_file=".env", extra="ignore")

    max_degree: int = Field(
        default=DEFAULT_MAX_DEGREE,
        ge=1,
        validation_alias=AliasChoices("SCHINZEL_MAX_DEGREE", "schinzel_max_degree"),
    )
    jobs: int = Field(default=1, ge=1, validation_alias=AliasChoices("SCHINZEL_JOBS", "schinzel_jobs"))
    cache_dir: Path = Field(
        default=Path(DEFAULT_CACHE_DIR),
        validation_alias=AliasChoices("SCHINZEL_CACHE_DIR", "schinzel_cache_dir"),
    )
    use_cache: bool = Field(default=True, validation_alias=AliasChoices("SCHINZEL_USE_CACHE", "schinzel_use_cache"))
    reports_dir: Path = Field(
        default=Path(DEFAULT_REPORTS_DIR),
        validation_alias=AliasChoices("SCHINZEL_REPORTS_DIR", "schinzel_reports_dir"),
    )

    @field_validator("max_degree")
    @classmethod
    def _guard_max_degree(cls, value: int) -> int:
        if value > MAX_DEGREE_GUARD:
            raise ValueError(f"max_degree {value} exceeds the guard {MAX_DEGREE_GUARD}")
        return value


class AppSettings(BaseSettings):
    """Main application settings."""
    model_config = SettingsConfigDict(env_file=".env", extra="ignore")

    debug: bool = Field(default=False, validation_alias=AliasChoices("DEBUG", "debug"))

    # Logging
    log_level: str = Field(default="INFO", validation_alias=AliasChoices("LOG_LEVEL", "log_level"))
    log_file: str = Field(default="", validation_alias=AliasChoices("LOG_FILE", "log_file"))

    # Sub-configurations
    engine: GroupEngineSettings = Field(default_factory=GroupEngineSettings)
    search: SearchSettings = Field(default_factory=SearchSettings)


@lru_cache()
def get_settings() -> AppSettings:
    """
    Get cached application settings.
    Uses lru_cache to ensure settings are only loaded once.
    """
    return AppSettings()


def reset_settings() -> AppSettings:
    """Drop the cached settings and reload them from the environment."""
    get_settings.cache_clear()
    return get_settings()


def get_engine_config() -> Dict[str, Any]:
    """Get group-engine bounds as a dictionary (used in report metadata)."""
    engine = get_settings().engine
    return {
        "order_bound": engine.order_bound,
        "brute_force_degree": engine.brute_force_degree,
    }


def resolve_order_bound(order_bound: Optional[int] = None) -> int:
    """Explicit bound if given, else the configured one."""
    return order_bound if order_bound is not None else get_settings().engine.order_bound


def resolve_brute_force_degree(bound: Optional[int] = None) -> int:
    """Explicit brute-force degree if given, else the configured one."""
    return bound if bound is not None else get_settings().engine.brute_force_degree
