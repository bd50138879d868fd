"""
FastAPI Application Entry Point

Batch HTTP surface over the scenario runner.

Usage:
    uvicorn ffdrive.main:app --port 8000
"""

import logging
from contextlib import asynccontextmanager

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from ffdrive import __version__
from ffdrive.api.router import api_router
from ffdrive.constants.constants import UNITS_HEADER
from ffdrive.core.config import settings
from ffdrive.core.logging import setup_logging
from ffdrive.runner.catalog import list_builtin_scenarios

logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    setup_logging()
    logger.info(f"ffdrive service starting up (env={settings.APP_ENV})")
    yield
    logger.info("ffdrive service shutting down")


app = FastAPI(
    title="ffdrive",
    description="Fast-forward trap protocol design and verification",
    version=__version__,
    lifespan=lifespan
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=settings.CORS_ORIGINS,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(api_router, prefix="/api")


@app.get("/")
async def root():
    return {
        "service": "ffdrive",
        "status": "running",
        "version": __version__
    }


@app.get("/health")
async def health():
    """Health check; the runner is ok when every builtin scenario validates."""
    try:
        builtins = len(list_builtin_scenarios())
        runner_status = "ok"
    except Exception as e:
        logger.error(f"Builtin catalog failed to load: {e}")
        builtins = 0
        runner_status = "error"
    return {
        "status": "healthy" if runner_status == "ok" else "degraded",
        "service": "ffdrive",
        "components": {
            "api": "ok",
            "runner": runner_status
        },
        "builtins": builtins,
        "units": UNITS_HEADER
    }


if __name__ == "__main__":
    import uvicorn
    uvicorn.run(app, host="0.0.0.0", port=8000)
