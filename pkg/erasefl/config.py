"""
Application configuration module.
Handles environment variables and process-wide settings.
"""

import os
from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Settings loaded from ERASEFL_* environment variables."""

    # Parallelism
    threads: int | None = Field(None, ge=1, description="Worker cap for replicas and grid points")

    # Logging
    log_level: str = "INFO"

    # Output
    output_dir: Path = Path("results")

    # Normal approximation is only validated for n >= 100
    short_packet_warn_below: int = 100

    model_config = SettingsConfigDict(
        env_prefix="ERASEFL_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore"
    )

    def worker_count(self) -> int:
        """Effective number of workers (defaults to the core count)."""
        return self.threads or os.cpu_count() or 1


settings = Settings()
