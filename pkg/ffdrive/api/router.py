"""
Central API Router

Aggregates the endpoint routers of the ffdrive HTTP surface.
"""

import logging

from fastapi import APIRouter

from ffdrive.api.scenarios import router as scenarios_router

logger = logging.getLogger(__name__)

api_router = APIRouter()
api_router.include_router(scenarios_router, prefix="/scenarios", tags=["Scenarios"])

logger.info(f"API router initialized with {len(api_router.routes)} routes")
