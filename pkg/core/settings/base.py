# core/settings/base.py
from pydantic_settings import BaseSettings, SettingsConfigDict


class SoatBaseSettings(BaseSettings):
    """Common configuration for every settings section: SOAT_-prefixed env vars, no unknown keys."""

    model_config = SettingsConfigDict(
        env_prefix="SOAT_",
        extra="forbid",
        validate_assignment=True,
    )
