"""
Runner Package

Scenario orchestration behind the CLI and the HTTP surface:
- catalog: builtin scenarios
- config_file: INI scenario files
- scenario_runner: design -> truncate -> propagate -> fidelity -> outputs
- sweep: fidelity versus truncation level
- outputs: CSV / JSON writers
"""

from ffdrive.runner.catalog import BUILTIN_SCENARIOS, get_builtin, list_builtin_scenarios
from ffdrive.runner.config_file import load_scenario_file, write_scenario_file
from ffdrive.runner.scenario_runner import ScenarioRunner, run_scenario, resolve_scenario
from ffdrive.runner.sweep import sweep_truncation, parse_c_values

__all__ = [
    "BUILTIN_SCENARIOS",
    "get_builtin",
    "list_builtin_scenarios",
    "load_scenario_file",
    "write_scenario_file",
    "ScenarioRunner",
    "run_scenario",
    "resolve_scenario",
    "sweep_truncation",
    "parse_c_values",
]
