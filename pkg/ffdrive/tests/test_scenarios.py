"""
Builtin Scenario Tests

Full-resolution runs of every builtin (1024 points on [-12, 12), 2048 for
split-5, n_t = 2000, dt <= 1e-3). Each takes seconds; the whole module well
under a minute.

Run: pytest tests/test_scenarios.py -v -m slow
"""

import numpy as np
import pytest
from scipy.integrate import trapezoid

pytestmark = pytest.mark.slow


def _run(name, **overrides):
    from ffdrive.runner.scenario_runner import run_scenario
    return run_scenario(name, overrides=overrides or None, write=False, design_workers=2)


def test_ground_to_excited_fidelity():
    summary = _run("ground-to-excited")
    assert summary.truncation == 8.0
    assert summary.fidelity == pytest.approx(0.9996, abs=0.0015)
    assert summary.norm_drift < 1e-8


def test_ground_to_excited_fidelity_ignores_node_margin():
    fidelities = [_run("ground-to-excited", node_margin=m).fidelity for m in (1.5, 2.0, 4.0)]
    assert max(fidelities) - min(fidelities) < 2e-3
    assert min(fidelities) >= 0.998


def test_expansion_fidelity_and_endpoints():
    from ffdrive.runner.catalog import get_builtin
    from ffdrive.runner.scenario_runner import ScenarioRunner

    runner = ScenarioRunner(get_builtin("expansion"), design_workers=2)
    protocol = runner.design()

    x = runner.grid.x
    assert np.max(np.abs(protocol.V[0] - 0.5 * x ** 2)[protocol.windows[0]]) < 1e-5
    assert np.max(np.abs(protocol.V[-1] - x ** 2 / 18.0)[protocol.windows[-1]]) < 1e-5
    assert np.min(protocol.center_curvature()[1:-1]) < 0.0

    evolution = runner.verify(protocol)
    assert evolution.fidelity >= 0.9999


def test_harmonic_to_linear():
    summary = _run("harmonic-to-linear")
    assert summary.fidelity >= 0.999
    assert summary.boundary_deviation["initial"] < 1e-4
    assert summary.boundary_deviation["final"] < 1e-4


def test_split_into_five_sites():
    from ffdrive.runner.catalog import get_builtin
    from ffdrive.runner.scenario_runner import ScenarioRunner

    runner = ScenarioRunner(get_builtin("split-5"), design_workers=2)
    protocol = runner.design()
    evolution = runner.verify(protocol)
    assert evolution.fidelity >= 0.99

    x = runner.grid.x
    density = evolution.final.density
    interior = density[1:-1]
    peaks = np.flatnonzero((interior > density[:-2]) & (interior > density[2:]) & (interior > 0.1 * density.max()))
    assert len(peaks) == 5

    edges = [-np.inf, -1.125, -0.375, 0.375, 1.125, np.inf]
    populations = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        cell = (x > lo) & (x <= hi)
        populations.append(trapezoid(density[cell], x=x[cell]))
    populations = np.array(populations)
    assert (populations.max() - populations.min()) / populations.mean() < 0.01


def test_excited_to_excited_keeps_node():
    from ffdrive.runner.catalog import get_builtin
    from ffdrive.runner.scenario_runner import ScenarioRunner

    runner = ScenarioRunner(get_builtin("excited-to-excited"), design_workers=2)
    protocol = runner.design()
    assert np.max(np.abs(protocol.rho[:, runner.grid.origin_index])) <= 1e-8

    evolution = runner.verify(protocol)
    assert evolution.fidelity >= 0.999


@pytest.mark.parametrize("name", ["expansion", "harmonic-to-linear", "split-5", "excited-to-excited", "ground-to-excited"])
def test_continuity_and_boundary_properties(name):
    from ffdrive.runner.catalog import get_builtin
    from ffdrive.runner.scenario_runner import ScenarioRunner

    config = get_builtin(name)
    protocol = ScenarioRunner(config, design_workers=2).design()
    assert np.max(protocol.diagnostics["continuity_residual"]) <= 1e-6

    limit = 1e-4 if name == "harmonic-to-linear" else 1e-5
    assert protocol.diagnostics["boundary_deviation"]["initial"] <= limit
    assert protocol.diagnostics["boundary_deviation"]["final"] <= limit


def test_truncation_plateau(tmp_path):
    from ffdrive.runner.sweep import sweep_truncation

    result = sweep_truncation(
        "ground-to-excited",
        [0.5, 1, 2, 4, 8, 12, 16, 32],
        out_dir=tmp_path,
        workers=4,
    )
    fidelity = {row.c: row.fidelity for row in result.rows}
    assert fidelity[0.5] < 0.9

    plateau = [fidelity[c] for c in (8.0, 12.0, 16.0, 32.0)]
    assert all(b >= a - 1e-3 for a, b in zip(plateau, plateau[1:]))
    assert result.wall_time_s < 60.0
