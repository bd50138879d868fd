"""
Scenario Schemas

Pydantic models for declarative scenarios (config files, builtins, HTTP requests).
All physical numbers are in hbar = m = 1 units with the initial trap frequency
as the frequency unit.
"""

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ffdrive.algorithms.traps import TrapPotential
from ffdrive.constants.constants import (
    DEFAULT_DT,
    DEFAULT_GRID_HALF_WIDTH,
    DEFAULT_GRID_POINTS,
    DEFAULT_N_T,
    UNITS_HEADER,
)
from ffdrive.constants.thresholds import (
    DENSITY_FLOOR,
    MAX_HERMITE_ORDER,
    MIN_STEPS_PER_PROTOCOL,
    NODE_MARGIN_DX,
)

# Trap declarations are the TrapPotential model itself
TrapSpec = TrapPotential


class GridSpec(BaseModel):
    """Symmetric box [-half_width, half_width) with the origin on a node."""
    half_width: float = Field(DEFAULT_GRID_HALF_WIDTH, gt=0, description="Half-width L of the box")
    n_points: int = Field(DEFAULT_GRID_POINTS, ge=16, description="Number of samples (power of two)")

    model_config = ConfigDict(extra="forbid")

    @field_validator("n_points")
    @classmethod
    def _power_of_two(cls, v: int) -> int:
        if v & (v - 1):
            raise ValueError("n_points must be a power of two")
        return v


class StateSpec(BaseModel):
    """
    Endpoint state: level n of a trap.

    A lattice trap with n = 0 is the lattice target (sum of site ground states).
    """
    trap: TrapSpec = Field(..., description="Trap the state belongs to")
    n: int = Field(0, ge=0, description="Quantum number")
    solver: Literal["auto", "analytic", "numerical"] = Field(
        "auto", description="auto: closed form for harmonic n <= 20, tridiagonal otherwise"
    )

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode="after")
    def _check_solver(self) -> "StateSpec":
        if self.trap.kind == "lattice" and self.n != 0:
            raise ValueError("lattice targets only define n = 0")
        if self.solver == "analytic":
            if self.trap.kind != "harmonic":
                raise ValueError("analytic states exist only for harmonic traps")
            if self.n > MAX_HERMITE_ORDER:
                raise ValueError(f"analytic states are limited to n <= {MAX_HERMITE_ORDER}")
        return self


class ScheduleSpec(BaseModel):
    eta: Literal["quintic"] = Field("quintic", description="Interpolation schedule")
    phase_convention: Literal["polynomial", "zero"] = Field(
        "polynomial", description="phi0 convention"
    )

    model_config = ConfigDict(extra="forbid")


class OutputSpec(BaseModel):
    directory: Optional[str] = Field(None, description="Output directory (overrides FFDRIVE_OUTPUT_DIR)")
    snapshots: Optional[int] = Field(None, ge=2, description="Recorded snapshot times")

    model_config = ConfigDict(extra="forbid")


class ScenarioConfig(BaseModel):
    """
    Full scenario: endpoints, duration, numerics and outputs.

    Matches the INI layout [scenario] [grid] [initial] [final] [schedule] [outputs].
    """
    name: str = Field(..., min_length=1, description="Scenario identifier")
    description: str = Field("", description="Free text")
    units: str = Field(UNITS_HEADER, description="Unit convention header")
    t_f: float = Field(..., gt=0, description="Protocol duration")
    interpolation: Literal["positive", "signed"] = Field("positive", description="Interpolation mode")
    flux_anchor: Literal["edges", "origin"] = Field("edges", description="Velocity flux anchor")
    n_t: int = Field(DEFAULT_N_T, ge=2, description="Designer time slices")
    dt: float = Field(DEFAULT_DT, gt=0, description="Propagator step")
    truncation: Optional[float] = Field(None, gt=0, description="Truncation level c")
    density_floor: float = Field(DENSITY_FLOOR, gt=0, description="Trust window floor")
    node_margin: float = Field(NODE_MARGIN_DX, ge=0, description="Node exclusion margin in grid spacings")

    grid: GridSpec = Field(default_factory=GridSpec)
    initial: StateSpec
    final: StateSpec
    schedule: ScheduleSpec = Field(default_factory=ScheduleSpec)
    outputs: OutputSpec = Field(default_factory=OutputSpec)

    model_config = ConfigDict(extra="forbid")

    @field_validator("units")
    @classmethod
    def _units(cls, v: str) -> str:
        if v.replace(" ", "") != UNITS_HEADER:
            raise ValueError(f"only '{UNITS_HEADER}' units are supported")
        return UNITS_HEADER

    @model_validator(mode="after")
    def _check_numerics(self) -> "ScenarioConfig":
        if self.dt > self.t_f / MIN_STEPS_PER_PROTOCOL * (1.0 + 1e-12):
            raise ValueError(f"dt must be <= t_f/{MIN_STEPS_PER_PROTOCOL}")
        for label, state in (("initial", self.initial), ("final", self.final)):
            if state.trap.kind == "tabulated" and len(state.trap.values or []) != self.grid.n_points:
                raise ValueError(f"{label} tabulated trap must have grid.n_points values")
        return self
