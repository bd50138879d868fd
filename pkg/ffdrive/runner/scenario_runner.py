"""
Scenario Runner

Orchestrates one scenario: build grid and endpoint states, design the
protocol, truncate, propagate, measure fidelity and write the output files.

Flow:
1. Resolve the scenario (builtin name or INI path) and apply overrides
2. Preflight: grid, states, schedule, designer (validation only)
3. Design all slices
4. Propagate with the step count aligned to the snapshot grid
5. Write V/V_trun/rho/density/psi CSVs and summary.json

Nothing is written unless every step before it succeeded.
"""

import logging
import math
import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from pydantic import ValidationError as PydanticValidationError
from scipy.integrate import trapezoid

from ffdrive.algorithms.designer import DesignedProtocol, ProtocolDesigner
from ffdrive.algorithms.grid import ComplexWave, Grid
from ffdrive.algorithms.propagator import EvolutionResult, PropagationConfig, Propagator
from ffdrive.algorithms.schedule import Schedule
from ffdrive.algorithms.traps import (
    Eigenstate,
    harmonic_eigenstate,
    lattice_target,
    solve_stationary,
)
from ffdrive.constants import constants as C
from ffdrive.constants.thresholds import MAX_HERMITE_ORDER
from ffdrive.core.config import settings
from ffdrive.core.errors import ValidationError
from ffdrive.core.logging import get_run_id, set_run_id
from ffdrive.runner.catalog import BUILTIN_SCENARIOS, get_builtin
from ffdrive.runner.config_file import load_scenario_file
from ffdrive.runner.outputs import write_json, write_snapshot_csv
from ffdrive.schemas.results import RunSummary
from ffdrive.schemas.scenario import GridSpec, ScenarioConfig, StateSpec

logger = logging.getLogger(__name__)


# ============================================================================
# Scenario Resolution
# ============================================================================

def resolve_scenario(ref: Union[str, Path, ScenarioConfig]) -> ScenarioConfig:
    """Builtin name, INI path or an already-built config."""
    if isinstance(ref, ScenarioConfig):
        return ref
    ref_str = str(ref)
    if ref_str in BUILTIN_SCENARIOS:
        return get_builtin(ref_str)
    return load_scenario_file(ref_str)


def apply_overrides(
    config: ScenarioConfig,
    grid_n: Optional[int] = None,
    dt: Optional[float] = None,
    overrides: Optional[Dict[str, Any]] = None
) -> ScenarioConfig:
    """Re-validated copy with CLI / API overrides applied."""
    data = config.model_dump()
    if grid_n is not None:
        data["grid"]["n_points"] = grid_n
    if dt is not None:
        data["dt"] = dt
    for key, value in (overrides or {}).items():
        if value is not None:
            data[key] = value
    try:
        return ScenarioConfig.model_validate(data)
    except PydanticValidationError as exc:
        raise ValidationError(
            "Invalid scenario override",
            details={"errors": exc.errors(include_url=False, include_context=False, include_input=False)}
        )


# ============================================================================
# Builders
# ============================================================================

def build_grid(spec: GridSpec) -> Grid:
    return Grid.symmetric(spec.half_width, spec.n_points, spectral=True)


def build_state(spec: StateSpec, grid: Grid) -> Eigenstate:
    """Closed form, tridiagonal solve or lattice target, per the state spec."""
    trap = spec.trap
    if trap.kind == "lattice":
        return lattice_target(trap.centers or [], trap.omega_site or 0.0, trap.weights, grid)
    if trap.kind == "harmonic" and spec.solver != "numerical" and spec.n <= MAX_HERMITE_ORDER:
        return harmonic_eigenstate(trap.omega or 0.0, spec.n, grid)
    return solve_stationary(trap, spec.n + 1, grid)[spec.n]


def aligned_steps(t_f: float, dt: float, snapshots: int) -> Tuple[int, int]:
    """(n_steps, record_every) with n_steps a multiple of snapshots - 1."""
    intervals = max(1, snapshots - 1)
    n_steps = max(1, int(math.ceil(t_f / dt - 1e-9)))
    record_every = int(math.ceil(n_steps / intervals))
    return record_every * intervals, record_every


# ============================================================================
# Runner
# ============================================================================

class ScenarioRunner:
    """
    Runs one scenario end to end.

    Args:
        config: Validated scenario
        design_workers: Threads for designer slices (default from settings)
    """

    def __init__(self, config: ScenarioConfig, design_workers: Optional[int] = None):
        self.config = config
        self.design_workers = design_workers or settings.DESIGN_WORKERS
        self.grid: Optional[Grid] = None
        self.initial: Optional[Eigenstate] = None
        self.final: Optional[Eigenstate] = None
        self.designer: Optional[ProtocolDesigner] = None
        self.warnings: List[str] = []

    # ---------- preflight ----------

    def preflight(self) -> ProtocolDesigner:
        """Build grid, endpoint states, schedule and designer."""
        if self.designer is not None:
            return self.designer
        cfg = self.config
        self.grid = build_grid(cfg.grid)
        self.initial = build_state(cfg.initial, self.grid)
        self.final = build_state(cfg.final, self.grid)

        for label, state in (("initial", self.initial), ("final", self.final)):
            if "edge_leakage" in state.diagnostics:
                self.warnings.append(f"{label} state reaches the box edge")
            if state.diagnostics.get("overlap_warning"):
                self.warnings.append(f"{label} lattice sites overlap")

        schedule = Schedule(
            t_f=cfg.t_f,
            E_i=self.initial.energy,
            E_f=self.final.energy,
            phase_convention=cfg.schedule.phase_convention,
        )
        self.designer = ProtocolDesigner(
            self.initial,
            self.final,
            schedule,
            mode=cfg.interpolation,
            flux_anchor=cfg.flux_anchor,
            density_floor=cfg.density_floor,
            node_margin=cfg.node_margin,
        )
        logger.info(
            f"Preflight ok: {cfg.initial.trap.describe()} n={cfg.initial.n} -> "
            f"{cfg.final.trap.describe()} n={cfg.final.n}, E_i={self.initial.energy:.8f}, "
            f"E_f={self.final.energy:.8f}"
        )
        return self.designer

    # ---------- stages ----------

    def design(self) -> DesignedProtocol:
        """Untruncated protocol."""
        designer = self.preflight()
        return designer.design(n_t=self.config.n_t, workers=self.design_workers)

    def verify(
        self,
        protocol: DesignedProtocol,
        snapshots: int = 2
    ) -> EvolutionResult:
        """Propagate the initial state through the (truncated) protocol."""
        assert self.initial is not None and self.final is not None and self.grid is not None
        t_f = self.config.t_f
        n_steps, record_every = aligned_steps(t_f, self.config.dt, snapshots)
        config = PropagationConfig(
            dt=t_f / n_steps,
            source=protocol,
            truncated=True,
            record_every=record_every,
        )
        return Propagator(self.grid).propagate(
            ComplexWave.from_real(self.initial.wave),
            config,
            t_f,
            target=ComplexWave.from_real(self.final.wave),
        )

    # ---------- full run ----------

    def run(self, out_dir: Optional[Union[str, Path]] = None, write: bool = True) -> RunSummary:
        """Design, verify and write outputs; returns the summary."""
        started = time.perf_counter()
        cfg = self.config
        snapshots = cfg.outputs.snapshots or settings.SNAPSHOTS

        protocol = self.design().with_truncation(cfg.truncation)
        evolution = self.verify(protocol, snapshots=snapshots)
        snap_times = evolution.snapshot_times
        snap_slices = [self.designer.evaluate_slice(j, t) for j, t in enumerate(snap_times)]

        x = self.grid.x
        density = np.array([w.density for w in evolution.snapshots])
        norms = [math.sqrt(float(trapezoid(row, x=x))) for row in density]

        warnings = list(self.warnings)
        if evolution.diagnostics.get("edge_warning"):
            warnings.append("wave reached the box edge during propagation")
        if protocol.diagnostics["norm_error"] > 1e-10:
            warnings.append(f"rho normalization error {protocol.diagnostics['norm_error']:.2e}")

        clamped = protocol.diagnostics.get("clamped_fraction")
        outputs: Dict[str, str] = {}
        if write:
            directory = Path(out_dir or cfg.outputs.directory or settings.OUTPUT_DIR)
            directory.mkdir(parents=True, exist_ok=True)
            V = np.array([s["V"] for s in snap_slices])
            fields = {
                "V": (C.FILE_POTENTIAL, V),
                "rho": (C.FILE_RHO, np.array([s["rho"] for s in snap_slices])),
                "density": (C.FILE_DENSITY, density),
                "psi_re": (C.FILE_PSI_REAL, np.array([w.values.real for w in evolution.snapshots])),
                "psi_im": (C.FILE_PSI_IMAG, np.array([w.values.imag for w in evolution.snapshots])),
            }
            if protocol.c is not None:
                fields["V_trun"] = (C.FILE_POTENTIAL_TRUNCATED, np.clip(V, -protocol.c, protocol.c))
            for key, (filename, values) in fields.items():
                outputs[key] = str(write_snapshot_csv(directory / filename, snap_times, x, values))
            outputs["summary"] = str(directory / C.FILE_SUMMARY)

        summary = RunSummary(
            run_id=get_run_id(),
            scenario=cfg.name,
            units=cfg.units,
            fidelity=float(evolution.fidelity),
            norm_drift=evolution.norm_drift,
            continuity_residual_max=float(np.max(protocol.diagnostics["continuity_residual"])),
            boundary_deviation=protocol.diagnostics["boundary_deviation"],
            clamped_fraction_max=float(np.max(clamped)) if clamped is not None else None,
            window_fraction_min=float(np.min(protocol.diagnostics["window_fraction"])),
            truncation=protocol.c,
            energies={"initial": self.initial.energy, "final": self.final.energy},
            n_t=protocol.n_t,
            n_steps=evolution.n_steps,
            dt=evolution.dt,
            edge_density_max=evolution.diagnostics["edge_density"],
            wall_time_s=time.perf_counter() - started,
            snapshot_times=snap_times,
            snapshot_norms=norms,
            nodes=[s["nodes"] for s in snap_slices],
            warnings=warnings,
            outputs=outputs,
        )
        if write:
            write_json(outputs["summary"], summary)
        logger.info(
            f"Scenario '{cfg.name}' done: fidelity {summary.fidelity:.6f}, "
            f"norm drift {summary.norm_drift:.2e}, {summary.wall_time_s:.1f}s"
        )
        return summary


# ============================================================================
# Entry Point
# ============================================================================

def run_scenario(
    ref: Union[str, Path, ScenarioConfig],
    out_dir: Optional[Union[str, Path]] = None,
    grid_n: Optional[int] = None,
    dt: Optional[float] = None,
    design_workers: Optional[int] = None,
    overrides: Optional[Dict[str, Any]] = None,
    write: bool = True
) -> RunSummary:
    """
    Run a builtin or file scenario.

    Raises:
        ValidationError / NotFoundError: config problems (exit 2)
        NumericError: design or propagation failure (exit 3)
    """
    config = apply_overrides(resolve_scenario(ref), grid_n=grid_n, dt=dt, overrides=overrides)
    set_run_id(C.make_run_id(config.name))
    runner = ScenarioRunner(config, design_workers=design_workers)
    runner.preflight()
    return runner.run(out_dir=out_dir, write=write)
