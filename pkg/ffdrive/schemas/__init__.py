"""
Pydantic Schemas Package

Typed models for scenarios (config files, builtins, HTTP requests) and results.

Export Groups:
- Scenario: TrapSpec, StateSpec, GridSpec, ScheduleSpec, OutputSpec, ScenarioConfig
- Results: RunSummary, SweepRow, SweepResult, BuiltinInfo
"""

from ffdrive.schemas.scenario import (
    TrapSpec,
    StateSpec,
    GridSpec,
    ScheduleSpec,
    OutputSpec,
    ScenarioConfig,
)
from ffdrive.schemas.results import (
    RunSummary,
    SweepRow,
    SweepResult,
    BuiltinInfo,
)

__all__ = [
    "TrapSpec",
    "StateSpec",
    "GridSpec",
    "ScheduleSpec",
    "OutputSpec",
    "ScenarioConfig",
    "RunSummary",
    "SweepRow",
    "SweepResult",
    "BuiltinInfo",
]
