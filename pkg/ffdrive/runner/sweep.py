"""
Truncation Sweep

Designs the protocol once, then re-truncates and re-propagates it for each
truncation level c. Points run on joblib threads; a failed point becomes a row
without fidelity and the sweep carries on. Output: sweep.csv (c, fidelity, ...)
and sweep.json.
"""

import contextvars
import logging
import time
from pathlib import Path
from typing import List, Optional, Sequence, Union

from joblib import Parallel, delayed

from ffdrive.algorithms.designer import DesignedProtocol
from ffdrive.constants import constants as C
from ffdrive.core.config import settings
from ffdrive.core.errors import AppError, ValidationError
from ffdrive.core.logging import get_run_id, set_run_id
from ffdrive.runner.outputs import write_json, write_table_csv
from ffdrive.runner.scenario_runner import ScenarioRunner, apply_overrides, resolve_scenario
from ffdrive.schemas.results import SweepResult, SweepRow
from ffdrive.schemas.scenario import ScenarioConfig

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ("c", "fidelity", "norm_drift", "clamped_fraction_max", "error")


def parse_c_values(raw: Union[str, Sequence[float]]) -> List[float]:
    """Parse and check a c list: positive, strictly ascending."""
    if isinstance(raw, str):
        try:
            values = [float(item) for item in raw.split(",") if item.strip()]
        except ValueError:
            raise ValidationError("c values must be numbers", details={"c": raw})
    else:
        values = [float(v) for v in raw]

    if not values:
        raise ValidationError("At least one c value is required")
    if any(not c > 0 for c in values):
        raise ValidationError("c values must be positive", details={"c": values})
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValidationError("c values must be ascending", details={"c": values})
    return values


def _sweep_point(runner: ScenarioRunner, protocol: DesignedProtocol, c: float) -> SweepRow:
    try:
        truncated = protocol.with_truncation(c)
        evolution = runner.verify(truncated)
    except AppError as exc:
        logger.warning(f"Sweep point c={c:g} failed: {exc.code}: {exc.message}")
        return SweepRow(c=c, error=exc.code)

    return SweepRow(
        c=c,
        fidelity=evolution.fidelity,
        norm_drift=evolution.norm_drift,
        clamped_fraction_max=float(truncated.diagnostics["clamped_fraction"].max()),
    )


def sweep_truncation(
    ref: Union[str, Path, ScenarioConfig],
    c_values: Union[str, Sequence[float]],
    out_dir: Optional[Union[str, Path]] = None,
    workers: Optional[int] = None,
    grid_n: Optional[int] = None,
    dt: Optional[float] = None,
    design_workers: Optional[int] = None,
    write: bool = True
) -> SweepResult:
    """
    Fidelity versus truncation level for one scenario.

    Args:
        ref: Builtin name, INI path or config
        c_values: Positive ascending truncation levels (list or "2,4,8")
        out_dir: Output directory (default from config / settings)
        workers: Concurrent sweep points (default FFDRIVE_WORKERS)

    Returns:
        SweepResult with one row per c, in input order
    """
    started = time.perf_counter()
    values = parse_c_values(c_values)
    config = apply_overrides(resolve_scenario(ref), grid_n=grid_n, dt=dt)
    set_run_id(C.make_run_id(f"{config.name}-sweep"))
    workers = workers or settings.WORKERS

    runner = ScenarioRunner(config, design_workers=design_workers)
    runner.preflight()
    protocol = runner.design()
    logger.info(f"Sweeping {len(values)} truncation levels with {workers} worker(s)")

    if workers > 1:
        rows = Parallel(n_jobs=workers, prefer="threads")(
            delayed(contextvars.copy_context().run)(_sweep_point, runner, protocol, c) for c in values
        )
    else:
        rows = [_sweep_point(runner, protocol, c) for c in values]

    result = SweepResult(
        run_id=get_run_id(),
        scenario=config.name,
        rows=rows,
        wall_time_s=time.perf_counter() - started,
    )

    if write:
        directory = Path(out_dir or config.outputs.directory or settings.OUTPUT_DIR)
        directory.mkdir(parents=True, exist_ok=True)
        write_table_csv(
            directory / C.FILE_SWEEP_CSV,
            [row.model_dump() for row in rows],
            SWEEP_COLUMNS,
        )
        write_json(directory / C.FILE_SWEEP_JSON, result)
        logger.info(f"Sweep written to {directory}")
    return result
