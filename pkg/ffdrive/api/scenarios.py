"""
Scenario API Endpoints

Batch runs of builtin scenarios over HTTP.

Endpoints:
- GET /scenarios - List builtin scenarios
- POST /scenarios/run - Run one builtin (optionally with overrides), returns the run summary
- POST /scenarios/sweep - Fidelity versus truncation level for one builtin

Runs execute in the threadpool; nothing is written to disk unless `write` is set.
"""

import logging
from typing import List, Optional

from fastapi import APIRouter
from fastapi.concurrency import run_in_threadpool
from pydantic import BaseModel, ConfigDict, Field

from ffdrive.core.errors import AppError, to_http_exception
from ffdrive.runner.catalog import get_builtin, list_builtin_scenarios
from ffdrive.runner.scenario_runner import run_scenario
from ffdrive.runner.sweep import sweep_truncation
from ffdrive.schemas.results import BuiltinInfo, RunSummary, SweepResult

logger = logging.getLogger(__name__)

router = APIRouter()

# ============================================================================
# Schemas
# ============================================================================

class RunRequest(BaseModel):
    """Request body for a scenario run."""
    scenario: str = Field(..., description="Builtin scenario name")
    grid_n: Optional[int] = Field(None, description="Override grid point count")
    dt: Optional[float] = Field(None, description="Override propagator step")
    n_t: Optional[int] = Field(None, description="Override designer slice count")
    truncation: Optional[float] = Field(None, description="Override truncation level c")
    write: bool = Field(False, description="Also write the output files")
    out_dir: Optional[str] = Field(None, description="Output directory when writing")

    model_config = ConfigDict(extra="forbid")


class SweepRequest(BaseModel):
    """Request body for a truncation sweep."""
    scenario: str = Field(..., description="Builtin scenario name")
    c: List[float] = Field(..., min_length=1, description="Ascending truncation levels")
    workers: Optional[int] = Field(None, ge=1, description="Concurrent sweep points")
    grid_n: Optional[int] = None
    dt: Optional[float] = None
    write: bool = False
    out_dir: Optional[str] = None

    model_config = ConfigDict(extra="forbid")


# ============================================================================
# Endpoints
# ============================================================================

@router.get("", response_model=List[BuiltinInfo])
async def list_scenarios():
    """Builtin scenarios in catalog order."""
    return list_builtin_scenarios()


@router.post("/run", response_model=RunSummary)
async def run(body: RunRequest):
    logger.info(f"Run request for '{body.scenario}'")
    try:
        config = get_builtin(body.scenario)
        return await run_in_threadpool(
            run_scenario,
            config,
            out_dir=body.out_dir,
            grid_n=body.grid_n,
            dt=body.dt,
            overrides={"n_t": body.n_t, "truncation": body.truncation},
            write=body.write,
        )
    except AppError as exc:
        raise to_http_exception(exc)


@router.post("/sweep", response_model=SweepResult)
async def sweep(body: SweepRequest):
    logger.info(f"Sweep request for '{body.scenario}' over {len(body.c)} levels")
    try:
        config = get_builtin(body.scenario)
        return await run_in_threadpool(
            sweep_truncation,
            config,
            body.c,
            out_dir=body.out_dir,
            workers=body.workers,
            grid_n=body.grid_n,
            dt=body.dt,
            write=body.write,
        )
    except AppError as exc:
        raise to_http_exception(exc)
