"""
Core Logging Module

Centralized logging configuration with run_id injection.
A scenario run sets its run_id once; every log line emitted while the run is
active (designer, propagator, writers) carries it, including lines from joblib
worker threads started inside a copied context.

Usage:
    # At process startup:
    from ffdrive.core.logging import setup_logging
    setup_logging()

    # Inside a run:
    from ffdrive.core.logging import set_run_id
    set_run_id("expansion-1a2b3c4d")
    logger = logging.getLogger(__name__)
    logger.info("Designing protocol")
"""

import logging
import sys
from contextvars import ContextVar
from typing import Optional


# ==================== Context Variables ====================

RUN_ID: ContextVar[str] = ContextVar("run_id", default="-")


def set_run_id(run_id: str) -> None:
    """
    Set the run_id for the current context.

    Args:
        run_id: Identifier of the scenario run (name plus short uuid)
    """
    RUN_ID.set(run_id)


def get_run_id() -> str:
    """
    Get the run_id for the current context.

    Returns:
        Current run_id or "-" if not set
    """
    return RUN_ID.get()


# ==================== Log Filters ====================

class RunIdFilter(logging.Filter):
    """Logging filter that copies the context run_id onto each record."""

    def filter(self, record: logging.LogRecord) -> bool:
        record.run_id = get_run_id()
        return True


# ==================== Logging Setup ====================

_logging_setup_done = False


def setup_logging(log_level: Optional[str] = None, force: bool = False) -> None:
    """
    Configure process-wide logging with run_id support.

    Sets up:
    - Root logger level from settings or parameter
    - Console handler on stdout
    - RunIdFilter for automatic run_id injection

    Idempotent unless force=True.

    Args:
        log_level: Optional level override (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        force: If True, reconfigure even if already set up
    """
    global _logging_setup_done

    if _logging_setup_done and not force:
        return

    if log_level is None:
        try:
            from ffdrive.core.config import settings
            log_level = settings.LOG_LEVEL
        except ImportError:
            log_level = "INFO"

    numeric_level = getattr(logging, log_level.upper(), logging.INFO)

    root_logger = logging.getLogger()
    root_logger.setLevel(numeric_level)

    if force:
        root_logger.handlers.clear()

    if not root_logger.handlers:
        console_handler = logging.StreamHandler(sys.stdout)
        console_handler.setLevel(numeric_level)

        formatter = logging.Formatter(
            fmt="%(asctime)s [%(levelname)s] [%(run_id)s] %(name)s: %(message)s",
            datefmt="%Y-%m-%d %H:%M:%S"
        )
        console_handler.setFormatter(formatter)
        console_handler.addFilter(RunIdFilter())

        root_logger.addHandler(console_handler)

    _logging_setup_done = True

    logger = logging.getLogger(__name__)
    logger.info(f"Logging configured with level: {log_level.upper()}")


def reset_logging() -> None:
    """
    Reset logging setup state.

    Does not remove handlers - call setup_logging(force=True) after this.
    """
    global _logging_setup_done
    _logging_setup_done = False


def get_logger(name: str) -> logging.Logger:
    """
    Get a logger, configuring logging first if nobody has yet.

    Args:
        name: Logger name (usually __name__)
    """
    if not _logging_setup_done:
        setup_logging()

    return logging.getLogger(name)
