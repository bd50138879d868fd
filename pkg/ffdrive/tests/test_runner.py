"""
Runner Tests

Tests for:
- builtin catalog
- INI scenario files (round trip, rejected input)
- run_scenario() outputs, summary and determinism
- sweep_truncation()

Runs use a coarse expansion scenario so the module finishes in seconds.

Run: pytest tests/test_runner.py -v
"""

import json

import numpy as np
import pytest


# ==================== Catalog ====================

def test_builtin_catalog_order():
    from ffdrive.runner.catalog import list_builtin_scenarios

    names = [info.name for info in list_builtin_scenarios()]
    assert names == ["expansion", "harmonic-to-linear", "split-5", "excited-to-excited", "ground-to-excited"]


def test_builtin_definitions():
    from ffdrive.runner.catalog import get_builtin

    g2e = get_builtin("ground-to-excited")
    assert g2e.interpolation == "signed"
    assert g2e.truncation == 8.0
    assert g2e.t_f == pytest.approx(8 * np.pi)
    assert g2e.initial.n == 0 and g2e.final.n == 1

    split = get_builtin("split-5")
    assert split.final.trap.kind == "lattice"
    assert split.final.trap.centers == [-1.5, -0.75, 0.0, 0.75, 1.5]
    assert split.grid.n_points == 2048
    assert split.dt == pytest.approx(5e-4)
    assert get_builtin("expansion").grid.n_points == 1024


def test_unknown_builtin():
    from ffdrive.core.errors import NotFoundError
    from ffdrive.runner.catalog import get_builtin

    with pytest.raises(NotFoundError) as exc_info:
        get_builtin("teleport")
    assert "expansion" in exc_info.value.details["available"]


# ==================== Config Files ====================

@pytest.mark.parametrize("name", ["expansion", "harmonic-to-linear", "split-5", "ground-to-excited"])
def test_ini_round_trip(tmp_path, name):
    from ffdrive.runner.catalog import get_builtin
    from ffdrive.runner.config_file import load_scenario_file, write_scenario_file

    config = get_builtin(name)
    path = write_scenario_file(config, tmp_path / f"{name}.ini")
    loaded = load_scenario_file(path)
    assert loaded.model_dump() == config.model_dump()


def test_ini_minimal_file_uses_defaults(tmp_path):
    from ffdrive.runner.config_file import load_scenario_file

    path = tmp_path / "minimal.ini"
    path.write_text(
        "[scenario]\n"
        "name = minimal\n"
        "t_f = 2.0\n"
        "\n"
        "[initial]\n"
        "trap = harmonic\n"
        "omega = 1\n"
        "\n"
        "[final]\n"
        "trap = lattice\n"
        "centers = -2, 2\n"
        "omega_site = 16\n"
    )
    config = load_scenario_file(path)
    assert config.grid.n_points == 1024
    assert config.n_t == 2000
    assert config.final.trap.centers == [-2.0, 2.0]
    assert config.units == "hbar=m=1"
    assert config.node_margin == 2.0


def test_ini_tabulated_values_file(tmp_path):
    from ffdrive.runner.config_file import load_scenario_file

    x = np.linspace(-4.0, 4.0, 64, endpoint=False)
    (tmp_path / "trap.csv").write_text("\n".join(repr(float(0.5 * v * v)) for v in x) + "\n")
    path = tmp_path / "tab.ini"
    path.write_text(
        "[scenario]\nname = tab\nt_f = 2.0\n\n"
        "[grid]\nhalf_width = 4\nn_points = 64\n\n"
        "[initial]\ntrap = harmonic\nomega = 1\n\n"
        "[final]\ntrap = tabulated\nvalues_file = trap.csv\n"
    )
    config = load_scenario_file(path)
    assert len(config.final.trap.values) == 64
    assert config.final.trap.values[0] == pytest.approx(8.0)


@pytest.mark.parametrize("body,expected", [
    ("[scenario]\nname = x\nt_f = 1\nbogus = 3\n[initial]\ntrap = harmonic\nomega = 1\n[final]\ntrap = harmonic\nomega = 1\n", "validation_error"),
    ("[scenario]\nname = x\nt_f = 1\n[initial]\ntrap = harmonic\nomega = 1\n[final]\ntrap = harmonic\nomega = 1\n[extras]\na = 1\n", "validation_error"),
    ("[scenario]\nname = x\nt_f = 1\n[initial]\ntrap = harmonic\nomega = 1\n", "validation_error"),
    ("[scenario]\nname = x\nt_f = 1\ndt = 0.01\n[initial]\ntrap = harmonic\nomega = 1\n[final]\ntrap = harmonic\nomega = 1\n", "validation_error"),
    ("[scenario]\nname = x\nt_f = 1\nunits = SI\n[initial]\ntrap = harmonic\nomega = 1\n[final]\ntrap = harmonic\nomega = 1\n", "validation_error"),
    ("[scenario]\nname = x\nt_f = 1\n[initial]\ntrap = lattice\ncenters = 1, 0\nomega_site = 4\n[final]\ntrap = harmonic\nomega = 1\n", "validation_error"),
])
def test_ini_rejected(tmp_path, body, expected):
    from ffdrive.core.errors import ValidationError
    from ffdrive.runner.config_file import load_scenario_file

    path = tmp_path / "bad.ini"
    path.write_text(body)
    with pytest.raises(ValidationError) as exc_info:
        load_scenario_file(path)
    assert exc_info.value.code == expected
    assert exc_info.value.exit_code == 2


def test_missing_config_file(tmp_path):
    from ffdrive.core.errors import NotFoundError
    from ffdrive.runner.config_file import load_scenario_file

    with pytest.raises(NotFoundError):
        load_scenario_file(tmp_path / "nope.ini")


def test_overrides_are_revalidated(small_expansion):
    from ffdrive.core.errors import ValidationError
    from ffdrive.runner.scenario_runner import apply_overrides

    tuned = apply_overrides(small_expansion, grid_n=512, overrides={"truncation": 6.0})
    assert tuned.grid.n_points == 512
    assert tuned.truncation == 6.0

    with pytest.raises(ValidationError):
        apply_overrides(small_expansion, grid_n=500)
    with pytest.raises(ValidationError):
        apply_overrides(small_expansion, dt=1.0)


def test_aligned_steps():
    from ffdrive.runner.scenario_runner import aligned_steps

    assert aligned_steps(1.0, 1e-3, 9) == (1000, 125)
    n_steps, every = aligned_steps(1.5079644737231006, 1e-3, 9)
    assert n_steps % 8 == 0 and n_steps == 8 * every
    assert n_steps >= 1508


# ==================== Scenario Runs ====================

def test_run_writes_outputs(tmp_path, small_expansion):
    from ffdrive.runner.outputs import norms_from_density_csv, read_snapshot_csv
    from ffdrive.runner.scenario_runner import run_scenario

    summary = run_scenario(small_expansion, out_dir=tmp_path)

    assert summary.scenario == "expansion"
    assert summary.run_id.startswith("expansion-")
    assert summary.fidelity >= 0.999
    assert summary.norm_drift < 1e-8
    assert summary.continuity_residual_max < 1e-6
    assert summary.truncation is None and summary.clamped_fraction_max is None
    assert len(summary.snapshot_times) == 5
    assert summary.snapshot_times[0] == 0.0
    assert summary.snapshot_times[-1] == pytest.approx(small_expansion.t_f)

    for name in ("V.csv", "rho.csv", "density.csv", "psi_re.csv", "psi_im.csv", "summary.json"):
        assert (tmp_path / name).exists()
    assert not (tmp_path / "V_trun.csv").exists()

    frame = read_snapshot_csv(tmp_path / "V.csv")
    assert list(frame.columns) == ["t", "x", "value"]
    assert len(frame) == 5 * 256

    norms = norms_from_density_csv(tmp_path / "density.csv")
    assert np.allclose(norms, summary.snapshot_norms, atol=1e-10)

    data = json.loads((tmp_path / "summary.json").read_text())
    assert data["fidelity"] == summary.fidelity
    assert set(data["boundary_deviation"]) == {"initial", "final"}


def test_run_with_truncation(tmp_path, small_expansion):
    from ffdrive.runner.outputs import read_snapshot_csv
    from ffdrive.runner.scenario_runner import run_scenario

    summary = run_scenario(small_expansion, out_dir=tmp_path, overrides={"truncation": 3.0})
    assert summary.truncation == 3.0
    assert summary.clamped_fraction_max > 0

    V_trun = read_snapshot_csv(tmp_path / "V_trun.csv")["value"].to_numpy()
    assert np.max(np.abs(V_trun)) <= 3.0


def test_run_is_deterministic(tmp_path, small_expansion):
    from ffdrive.runner.scenario_runner import run_scenario

    run_scenario(small_expansion, out_dir=tmp_path / "a")
    run_scenario(small_expansion, out_dir=tmp_path / "b")
    for name in ("V.csv", "rho.csv", "density.csv", "psi_re.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_run_without_writing(small_expansion):
    from ffdrive.runner.scenario_runner import run_scenario

    summary = run_scenario(small_expansion, write=False)
    assert summary.outputs == {}
    assert len(summary.nodes) == len(summary.snapshot_times)


def test_run_numeric_failure_writes_nothing(tmp_path, small_expansion):
    from ffdrive.core.errors import NumericError
    from ffdrive.runner.scenario_runner import run_scenario

    with pytest.raises(NumericError) as exc_info:
        run_scenario(small_expansion, out_dir=tmp_path / "out", overrides={"density_floor": 10.0})
    assert exc_info.value.exit_code == 3
    assert not (tmp_path / "out").exists()


def test_scenario_runner_stages(small_expansion):
    from ffdrive.runner.scenario_runner import ScenarioRunner

    runner = ScenarioRunner(small_expansion)
    designer = runner.preflight()
    assert runner.preflight() is designer
    assert runner.initial.energy == pytest.approx(0.5)
    assert runner.final.energy == pytest.approx(1.0 / 6.0)

    protocol = runner.design()
    assert protocol.n_t == 200
    evolution = runner.verify(protocol)
    assert evolution.fidelity >= 0.999
    assert len(evolution.snapshots) == 2


# ==================== Sweep ====================

def test_parse_c_values():
    from ffdrive.core.errors import ValidationError
    from ffdrive.runner.sweep import parse_c_values

    assert parse_c_values("0.5, 2,8") == [0.5, 2.0, 8.0]
    assert parse_c_values([1, 3]) == [1.0, 3.0]
    for bad in ("", "2,1", "1,1", "-1,2", "a,b"):
        with pytest.raises(ValidationError):
            parse_c_values(bad)


def test_sweep_truncation(tmp_path, small_expansion):
    import pandas as pd
    from ffdrive.runner.sweep import sweep_truncation

    result = sweep_truncation(small_expansion, "1,4,16", out_dir=tmp_path, workers=2)

    assert [row.c for row in result.rows] == [1.0, 4.0, 16.0]
    for row in result.rows:
        assert row.error is None
        assert 0.0 <= row.fidelity <= 1.0 + 1e-9
    assert result.rows[0].clamped_fraction_max >= result.rows[-1].clamped_fraction_max
    assert result.run_id.startswith("expansion-sweep-")

    table = pd.read_csv(tmp_path / "sweep.csv")
    assert list(table.columns) == ["c", "fidelity", "norm_drift", "clamped_fraction_max", "error"]
    assert table["c"].tolist() == [1.0, 4.0, 16.0]
    assert json.loads((tmp_path / "sweep.json").read_text())["scenario"] == "expansion"
