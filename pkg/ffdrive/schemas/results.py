"""
Result Schemas

Pydantic models for run summaries, truncation sweeps and the builtin catalog.
summary.json and sweep.json are these models serialized.
"""

from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field


class RunSummary(BaseModel):
    """Outcome of design -> truncate -> propagate -> fidelity."""
    run_id: str = Field(..., description="Run identifier")
    scenario: str = Field(..., description="Scenario name")
    units: str = Field(..., description="Unit convention")
    fidelity: float = Field(..., description="|<psi(t_f)|psi_f>|^2")
    norm_drift: float = Field(..., description="| ||psi(t_f)|| - 1 |")
    continuity_residual_max: float = Field(..., description="Max relative continuity residual over slices")
    boundary_deviation: Dict[str, float] = Field(..., description="Endpoint potential deviation (initial, final)")
    clamped_fraction_max: Optional[float] = Field(None, description="Max fraction of points with |V| >= c")
    window_fraction_min: float = Field(..., description="Smallest trust window fraction over slices")
    truncation: Optional[float] = Field(None, description="Truncation level c")
    energies: Dict[str, float] = Field(..., description="Endpoint energies (initial, final)")
    n_t: int = Field(..., description="Designer slices")
    n_steps: int = Field(..., description="Propagator steps")
    dt: float = Field(..., description="Effective propagator step")
    edge_density_max: float = Field(..., description="Max |psi|^2 at the box edges")
    wall_time_s: float = Field(..., description="Wall-clock time in seconds")
    snapshot_times: List[float] = Field(default_factory=list)
    snapshot_norms: List[float] = Field(default_factory=list)
    nodes: List[List[float]] = Field(default_factory=list, description="rho nodes at snapshot times")
    warnings: List[str] = Field(default_factory=list)
    outputs: Dict[str, str] = Field(default_factory=dict, description="Written files by field")

    model_config = ConfigDict(extra="forbid")


class SweepRow(BaseModel):
    c: float = Field(..., gt=0, description="Truncation level")
    fidelity: Optional[float] = Field(None, description="Missing when the point failed")
    norm_drift: Optional[float] = None
    clamped_fraction_max: Optional[float] = None
    error: Optional[str] = Field(None, description="Error code of a failed point")


class SweepResult(BaseModel):
    run_id: str
    scenario: str
    rows: List[SweepRow]
    wall_time_s: float

    model_config = ConfigDict(extra="forbid")


class BuiltinInfo(BaseModel):
    name: str
    description: str
    t_f: float
    interpolation: str
    truncation: Optional[float] = None
