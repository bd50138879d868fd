"""
Scenario Config Files

INI files with sections [scenario] [grid] [initial] [final] [schedule] [outputs].
Example:

    [scenario]
    name = expansion
    units = hbar=m=1
    t_f = 1.5079644737231006
    interpolation = positive

    [initial]
    trap = harmonic
    omega = 1
    n = 0

    [final]
    trap = harmonic
    omega = 0.3333333333333333

List values (centers, weights, values) are comma separated; a tabulated trap
may instead point `values_file` at a one-column CSV.
"""

import configparser
import logging
from io import StringIO
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import pandas as pd
from pydantic import ValidationError as PydanticValidationError

from ffdrive.core.errors import NotFoundError, ValidationError
from ffdrive.schemas.scenario import ScenarioConfig

logger = logging.getLogger(__name__)

SECTIONS = ("scenario", "grid", "initial", "final", "schedule", "outputs")
LIST_KEYS = ("centers", "weights", "values")
TRAP_KEYS = ("omega", "slope", "centers", "omega_site", "weights", "values")


def _parse_list(raw: str, key: str) -> List[float]:
    try:
        return [float(item) for item in raw.replace("\n", ",").split(",") if item.strip()]
    except ValueError:
        raise ValidationError(f"'{key}' must be a comma-separated list of numbers", details={"value": raw})


def _state_section(section: Dict[str, str], base_dir: Path, label: str) -> Dict[str, Any]:
    if "trap" not in section:
        raise ValidationError(f"[{label}] needs a 'trap' kind", details={"section": label})

    trap: Dict[str, Any] = {"kind": section["trap"]}
    for key in TRAP_KEYS:
        if key in section:
            trap[key] = _parse_list(section[key], key) if key in LIST_KEYS else section[key]

    if "values_file" in section:
        path = (base_dir / section["values_file"]).resolve()
        if not path.exists():
            raise NotFoundError(f"Tabulated trap file not found: {path}")
        trap["values"] = pd.read_csv(path, header=None).iloc[:, 0].astype(float).tolist()

    state: Dict[str, Any] = {"trap": trap}
    for key in ("n", "solver"):
        if key in section:
            state[key] = section[key]

    unknown = set(section) - set(TRAP_KEYS) - {"trap", "values_file", "n", "solver"}
    if unknown:
        raise ValidationError(f"Unknown keys in [{label}]", details={"keys": sorted(unknown)})
    return state


def parse_scenario(parser: configparser.ConfigParser, base_dir: Optional[Path] = None) -> ScenarioConfig:
    """Build a ScenarioConfig from parsed INI sections."""
    base_dir = base_dir or Path.cwd()
    unknown = set(parser.sections()) - set(SECTIONS)
    if unknown:
        raise ValidationError("Unknown config sections", details={"sections": sorted(unknown)})
    for required in ("scenario", "initial", "final"):
        if not parser.has_section(required):
            raise ValidationError(f"Missing [{required}] section", details={"section": required})

    def section(name: str) -> Dict[str, str]:
        if not parser.has_section(name):
            return {}
        return {k: v.strip() for k, v in parser.items(name) if v.strip() != ""}

    data: Dict[str, Any] = dict(section("scenario"))
    data["initial"] = _state_section(section("initial"), base_dir, "initial")
    data["final"] = _state_section(section("final"), base_dir, "final")
    for name in ("grid", "schedule", "outputs"):
        values = section(name)
        if values:
            data[name] = values

    try:
        return ScenarioConfig.model_validate(data)
    except PydanticValidationError as exc:
        raise ValidationError(
            "Invalid scenario config",
            details={"errors": exc.errors(include_url=False, include_context=False, include_input=False)}
        )


def load_scenario_file(path: Union[str, Path]) -> ScenarioConfig:
    path = Path(path)
    if not path.is_file():
        raise NotFoundError(f"Config file not found: {path}", details={"path": str(path)})

    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read(path, encoding="utf-8")
    except configparser.Error as exc:
        raise ValidationError(f"Unparseable config file: {exc}", details={"path": str(path)})

    config = parse_scenario(parser, base_dir=path.parent)
    logger.info(f"Loaded scenario '{config.name}' from {path}")
    return config


def _fmt(value: Any) -> str:
    if isinstance(value, list):
        return ", ".join(repr(float(v)) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def scenario_to_ini(config: ScenarioConfig) -> str:
    """Render a ScenarioConfig back to INI text (floats as repr, round-trip exact)."""
    parser = configparser.ConfigParser(interpolation=None)

    scenario = config.model_dump(
        exclude={"grid", "initial", "final", "schedule", "outputs"}, exclude_none=True
    )
    parser["scenario"] = {k: _fmt(v) for k, v in scenario.items()}
    parser["grid"] = {k: _fmt(v) for k, v in config.grid.model_dump().items()}

    for label, state in (("initial", config.initial), ("final", config.final)):
        trap = state.trap.model_dump(exclude_none=True)
        body = {"trap": trap.pop("kind")}
        body.update({k: _fmt(v) for k, v in trap.items()})
        body["n"] = str(state.n)
        body["solver"] = state.solver
        parser[label] = body

    parser["schedule"] = {k: _fmt(v) for k, v in config.schedule.model_dump().items()}
    outputs = config.outputs.model_dump(exclude_none=True)
    if outputs:
        parser["outputs"] = {k: _fmt(v) for k, v in outputs.items()}

    buffer = StringIO()
    parser.write(buffer)
    return buffer.getvalue()


def write_scenario_file(config: ScenarioConfig, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(scenario_to_ini(config), encoding="utf-8")
    return path
