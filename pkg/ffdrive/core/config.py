"""
Core Configuration Module

Centralizes environment configuration for ffdrive runs (CLI, HTTP surface, tests).
Provides a singleton Settings object; values come from the process environment,
optionally seeded from a `.env` file in the working directory.

Usage:
    from ffdrive.core.config import settings

    print(settings.OUTPUT_DIR)
    print(settings.WORKERS)
"""

import os
from typing import List, Optional

from dotenv import load_dotenv

load_dotenv(override=False)


class Settings:
    """
    Runtime settings loaded from environment variables.

    Every property re-reads the environment, so tests can monkeypatch
    variables without rebuilding the singleton.
    """

    # ==================== Application Settings ====================

    @property
    def APP_ENV(self) -> str:
        """Environment: dev, staging, production"""
        return os.getenv("FFDRIVE_ENV", "dev")

    @property
    def LOG_LEVEL(self) -> str:
        """Logging level: DEBUG, INFO, WARNING, ERROR, CRITICAL"""
        return os.getenv("LOG_LEVEL", "INFO")

    # ==================== Run Settings ====================

    @property
    def OUTPUT_DIR(self) -> str:
        """Default output directory for `run` and `sweep`"""
        return os.getenv("FFDRIVE_OUTPUT_DIR", "./ffdrive-out")

    @property
    def WORKERS(self) -> int:
        """Worker count for truncation sweeps"""
        return max(1, int(os.getenv("FFDRIVE_WORKERS", "1")))

    @property
    def DESIGN_WORKERS(self) -> int:
        """Worker count for designer slice evaluation"""
        return max(1, int(os.getenv("FFDRIVE_DESIGN_WORKERS", "1")))

    @property
    def SNAPSHOTS(self) -> int:
        """Number of uniformly spaced snapshot times written per run"""
        return max(2, int(os.getenv("FFDRIVE_SNAPSHOTS", "9")))

    # ==================== HTTP Settings ====================

    @property
    def CORS_ORIGINS(self) -> List[str]:
        """Allowed CORS origins"""
        origins_str = os.getenv("FFDRIVE_CORS_ORIGINS", "*")
        if origins_str == "*":
            return ["*"]
        return [origin.strip() for origin in origins_str.split(",")]


# ==================== Singleton Instance ====================

_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """
    Get the singleton Settings instance.

    Example:
        >>> from ffdrive.core.config import get_settings
        >>> get_settings().WORKERS
        1
    """
    global _settings

    if _settings is None:
        _settings = Settings()

    return _settings


# Convenience singleton for direct import
settings = get_settings()


# ==================== Helper Functions ====================

def is_production() -> bool:
    """True if FFDRIVE_ENV is 'production' or 'prod'."""
    return settings.APP_ENV.lower() in ("production", "prod")


def is_development() -> bool:
    """True if FFDRIVE_ENV is 'dev' or 'development'."""
    return settings.APP_ENV.lower() in ("dev", "development")
