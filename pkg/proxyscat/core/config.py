"""Library defaults via Pydantic Settings v2.

Every value can be overridden with a PROXYSCAT_* environment variable or a
.env file. Manifest fields take precedence over these defaults.
"""

from functools import lru_cache
from pathlib import Path
from typing import Literal

from pydantic import Field, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Runtime defaults for solves, logging and artifact placement."""

    model_config = SettingsConfigDict(
        env_prefix="PROXYSCAT_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = "INFO"
    log_format: Literal["json", "console"] = "json"

    threads: int = Field(default=1, ge=1, le=256)
    artifacts_dir: Path = Path("./artifacts")

    # evaluation targets closer than this many node spacings are reported
    near_zone_factor: float = Field(default=2.0, gt=0.0)

    transfer_dense_max_proxies: int = Field(default=16, ge=1)
    gmres_default_tol: float = Field(default=1e-9, gt=0.0, lt=1.0)
    gmres_default_max_iter: int = Field(default=500, ge=1)

    sommerfeld_default_tol: float = Field(default=1e-10, gt=0.0, lt=1.0)
    sommerfeld_panel_order: int = Field(default=16, ge=4, le=32)

    @field_validator("artifacts_dir", mode="before")
    @classmethod
    def strip_artifacts_dir(cls, v: object) -> object:
        """Reject blank artifact directories."""
        if isinstance(v, str):
            if not v.strip():
                raise ValueError("artifacts_dir cannot be blank")
            return v.strip()
        return v

    @model_validator(mode="after")
    def check_tolerances(self) -> "Settings":
        """The Sommerfeld integrals must be resolved below the GMRES tolerance."""
        if self.sommerfeld_default_tol > self.gmres_default_tol:
            raise ValueError(
                f"sommerfeld_default_tol ({self.sommerfeld_default_tol:g}) must not exceed "
                f"gmres_default_tol ({self.gmres_default_tol:g})"
            )
        return self


@lru_cache
def get_settings() -> Settings:
    """Cached settings; tests clear the cache after changing the environment."""
    return Settings()
