import sys
from pathlib import Path

import pytest

# Add the repository root to sys.path so that "ffdrive" can be imported
# structure: <root>/ffdrive/tests/conftest.py
current_dir = Path(__file__).parent.absolute()
root_dir = current_dir.parent.parent
sys.path.insert(0, str(root_dir))


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full-resolution builtin scenario runs")


@pytest.fixture
def grid():
    """Default symmetric grid: [-12, 12), 1024 points, origin on a node."""
    from ffdrive.algorithms.grid import Grid
    return Grid.symmetric(12.0, 1024)


@pytest.fixture
def ground(grid):
    """Ground state of U = x^2 / 2."""
    from ffdrive.algorithms.traps import harmonic_eigenstate
    return harmonic_eigenstate(1.0, 0, grid)


@pytest.fixture
def first_excited(grid):
    from ffdrive.algorithms.traps import harmonic_eigenstate
    return harmonic_eigenstate(1.0, 1, grid)


@pytest.fixture
def small_expansion():
    """Expansion scenario on a coarse grid with few slices (seconds to run)."""
    from ffdrive.runner.catalog import get_builtin
    config = get_builtin("expansion")
    data = config.model_dump()
    data["grid"]["n_points"] = 256
    data["n_t"] = 200
    data["outputs"]["snapshots"] = 5
    return type(config).model_validate(data)
