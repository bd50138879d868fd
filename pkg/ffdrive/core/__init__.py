"""
Core Package

Centralized configuration, logging and error handling for ffdrive.

Modules:
- config: Environment configuration and settings
- logging: Logging with run_id injection
- errors: Error classes with HTTP and exit-code mapping

Usage:
    from ffdrive.core import settings, setup_logging, set_run_id
    from ffdrive.core import ValidationError, NumericError
"""

from ffdrive.core.config import settings, get_settings, is_production, is_development

from ffdrive.core.logging import (
    setup_logging,
    set_run_id,
    get_run_id,
    get_logger
)

from ffdrive.core.errors import (
    AppError,
    ValidationError,
    GridMismatchError,
    NotFoundError,
    NumericError,
    EmptyWindowError,
    CollinearityError,
    error_payload,
    to_http_exception
)

__all__ = [
    # Config
    "settings",
    "get_settings",
    "is_production",
    "is_development",

    # Logging
    "setup_logging",
    "set_run_id",
    "get_run_id",
    "get_logger",

    # Errors
    "AppError",
    "ValidationError",
    "GridMismatchError",
    "NotFoundError",
    "NumericError",
    "EmptyWindowError",
    "CollinearityError",
    "error_payload",
    "to_http_exception",
]
