"""
Trap and Eigenstate Tests

Tests for:
- TrapPotential validation and evaluation
- harmonic_eigenstate() closed form
- solve_stationary() against harmonic, Airy and box oracles
- lattice_target() stationarity and overlap diagnostics

Run: pytest tests/test_traps.py -v
"""

import math

import numpy as np
import pytest


# ==================== Trap Potentials ====================

def test_trap_kinds_require_their_parameters():
    from pydantic import ValidationError as PydanticValidationError
    from ffdrive.algorithms.traps import TrapPotential

    with pytest.raises(PydanticValidationError):
        TrapPotential(kind="harmonic")
    with pytest.raises(PydanticValidationError):
        TrapPotential(kind="linear", slope=-1.0)
    with pytest.raises(PydanticValidationError):
        TrapPotential.lattice([0.5, -0.5], 16.0)
    with pytest.raises(PydanticValidationError):
        TrapPotential.lattice([-0.5, 0.5], 16.0, weights=[1.0, -1.0])
    with pytest.raises(PydanticValidationError):
        TrapPotential(kind="harmonic", omega=1.0, bogus=2)


def test_trap_evaluate(grid):
    from ffdrive.algorithms.traps import TrapPotential

    x = grid.x
    assert np.allclose(TrapPotential.harmonic(2.0).evaluate(grid), 2.0 * x ** 2)
    assert np.allclose(TrapPotential.linear(1.5).evaluate(grid), 1.5 * np.abs(x))

    tab = TrapPotential.tabulated(np.cos(x))
    assert np.array_equal(tab.evaluate(grid), np.cos(x))


def test_tabulated_length_mismatch(grid):
    from ffdrive.algorithms.traps import TrapPotential
    from ffdrive.core.errors import ValidationError

    with pytest.raises(ValidationError):
        TrapPotential.tabulated([0.0] * 10).evaluate(grid)


def test_lattice_potential_near_sites(grid):
    """Close to a site the lattice trap is that site's parabola."""
    from ffdrive.algorithms.traps import TrapPotential

    trap = TrapPotential.lattice([-1.5, 0.0, 1.5], 64.0)
    U = trap.evaluate(grid)
    near = np.abs(grid.x - 1.5) < 0.2
    assert np.allclose(U[near], 0.5 * 64.0 ** 2 * (grid.x[near] - 1.5) ** 2, rtol=1e-6, atol=1e-9)
    assert trap.describe() == "lattice(3 sites, omega_site=64)"


# ==================== Closed-form States ====================

@pytest.mark.parametrize("n", [0, 1, 2, 5])
def test_harmonic_eigenstate_normalized(grid, n):
    from ffdrive.algorithms.grid import norm
    from ffdrive.algorithms.traps import harmonic_eigenstate

    state = harmonic_eigenstate(1.0, n, grid)
    assert norm(state.wave) == pytest.approx(1.0, abs=1e-10)
    assert state.energy == n + 0.5
    assert state.diagnostics["nodes"] == n
    # positive as x -> +inf
    assert state.values[grid.x > 4.0][0] > 0


def test_harmonic_eigenstates_orthogonal(grid):
    from ffdrive.algorithms.grid import inner
    from ffdrive.algorithms.traps import harmonic_eigenstate

    a = harmonic_eigenstate(1.0, 0, grid)
    b = harmonic_eigenstate(1.0, 2, grid)
    assert abs(inner(a.wave, b.wave)) < 1e-10


def test_harmonic_ground_state_closed_form_values(grid):
    """psi_0(0) = (omega / pi)^(1/4); overlap of omega = 1 and 1/3 ground states."""
    from ffdrive.algorithms.grid import inner
    from ffdrive.algorithms.traps import harmonic_eigenstate

    wide = harmonic_eigenstate(1.0 / 3.0, 0, grid)
    assert wide.energy == pytest.approx(1.0 / 6.0, abs=1e-15)
    assert wide.values[grid.origin_index] == pytest.approx(3.0 ** -0.25 * np.pi ** -0.25, abs=1e-9)
    assert wide.values[grid.origin_index] == pytest.approx(0.570732, abs=1e-6)

    narrow = harmonic_eigenstate(1.0, 0, grid)
    xi = 1.0 / 3.0
    overlap = inner(narrow.wave, wide.wave)
    assert overlap == pytest.approx(math.sqrt(2 * math.sqrt(xi) / (1 + xi)), abs=1e-10)
    assert overlap == pytest.approx(0.930605, abs=1e-4)


def test_harmonic_curvature_matches_spectral_derivative(grid):
    from ffdrive.algorithms.grid import second_derivative
    from ffdrive.algorithms.traps import harmonic_eigenstate

    state = harmonic_eigenstate(0.5, 3, grid)
    d2 = second_derivative(state.wave, method="spectral").values
    assert np.max(np.abs(state.curvature - d2)) < 1e-8


def test_harmonic_eigenstate_order_cap(grid):
    from ffdrive.algorithms.traps import harmonic_eigenstate
    from ffdrive.core.errors import ValidationError

    with pytest.raises(ValidationError):
        harmonic_eigenstate(1.0, 21, grid)
    with pytest.raises(ValidationError):
        harmonic_eigenstate(0.0, 0, grid)


def test_count_nodes_and_positions(grid):
    from ffdrive.algorithms.traps import count_nodes, harmonic_eigenstate, node_positions

    state = harmonic_eigenstate(1.0, 3, grid)
    assert count_nodes(state.values) == 3

    nodes = node_positions(state.values, grid)
    # roots of H_3: 0, +-sqrt(3/2)
    assert nodes == pytest.approx([-math.sqrt(1.5), 0.0, math.sqrt(1.5)], abs=1e-3)


# ==================== Numerical Eigensolver ====================

def test_solver_harmonic_spectrum():
    """3-point solver: E_n = n + 1/2 up to the O(dx^2) <p^4> dx^2 / 24 shift."""
    from ffdrive.algorithms.grid import Grid
    from ffdrive.algorithms.traps import TrapPotential, solve_stationary

    g = Grid.symmetric(12.0, 2048)
    states = solve_stationary(TrapPotential.harmonic(1.0), 6, g)

    assert abs(states[0].energy - 0.5) < 1e-5
    for n, state in enumerate(states):
        assert abs(state.energy - (n + 0.5)) < 1e-5 * (2 * n * n + 2 * n + 1)
        assert state.diagnostics["nodes"] == n
        assert state.diagnostics["residual"] < 1e-8
        assert "edge_leakage" not in state.diagnostics


def test_solver_converges_at_second_order():
    """Halving dx cuts the ground-state energy error by 4."""
    from ffdrive.algorithms.grid import Grid
    from ffdrive.algorithms.traps import TrapPotential, solve_stationary

    errors = [
        abs(solve_stationary(TrapPotential.harmonic(1.0), 1, Grid.symmetric(12.0, n))[0].energy - 0.5)
        for n in (512, 1024, 2048)
    ]
    for coarse, fine in zip(errors, errors[1:]):
        assert coarse / fine == pytest.approx(4.0, rel=0.2)


def test_solver_matches_closed_form(grid):
    from ffdrive.algorithms.grid import inner
    from ffdrive.algorithms.traps import TrapPotential, harmonic_eigenstate, solve_stationary

    numerical = solve_stationary(TrapPotential.harmonic(1.0), 2, grid)
    for n in (0, 1):
        exact = harmonic_eigenstate(1.0, n, grid)
        # same sign convention, so the overlap is +1
        assert inner(numerical[n].wave, exact.wave) > 1.0 - 1e-6


def test_solver_linear_trap_airy_oracle(grid):
    """Ground energy of k|x| is -a'_1 (k^2/2)^(1/3)."""
    from scipy.special import ai_zeros
    from ffdrive.algorithms.traps import TrapPotential, solve_stationary

    k = 1.5
    a_prime_1 = ai_zeros(1)[1][0]
    expected = -a_prime_1 * (k * k / 2.0) ** (1.0 / 3.0)

    ground = solve_stationary(TrapPotential.linear(k), 1, grid)[0]
    assert ground.energy == pytest.approx(expected, abs=1e-3)
    assert ground.energy == pytest.approx(1.0596, abs=1e-3)


def test_solver_box_oracle():
    """Flat tabulated trap with Dirichlet edges: E_1 ~ pi^2 / (2 L^2)."""
    from ffdrive.algorithms.grid import Grid
    from ffdrive.algorithms.traps import TrapPotential, solve_stationary

    g = Grid(-1.0, 1.0, 2001)
    ground = solve_stationary(TrapPotential.tabulated(np.zeros(2001)), 1, g)[0]
    assert ground.energy == pytest.approx(math.pi ** 2 / 8.0, rel=0.01)


def test_solver_flags_edge_leakage():
    """A state squeezed against the box edge gets a leakage diagnostic."""
    from ffdrive.algorithms.grid import Grid
    from ffdrive.algorithms.traps import TrapPotential, solve_stationary

    g = Grid.symmetric(2.0, 256)
    state = solve_stationary(TrapPotential.harmonic(0.1), 1, g)[0]
    assert state.diagnostics["edge_leakage"] > 1e-8


def test_stationary_residual_closed_form(grid, ground):
    from ffdrive.algorithms.traps import stationary_residual

    assert stationary_residual(ground) < 1e-5


# ==================== Lattice Target ====================

def test_lattice_target_is_stationary(grid):
    """psi'' = 2 (U - omega_site/2) psi with U the lattice trap."""
    from ffdrive.algorithms.grid import norm, second_derivative
    from ffdrive.algorithms.traps import lattice_target

    state = lattice_target([-1.5, -0.75, 0.0, 0.75, 1.5], 64.0, None, grid)
    assert norm(state.wave) == pytest.approx(1.0, abs=1e-10)
    assert state.energy == 32.0
    assert state.diagnostics["nodes"] == 0

    U = state.trap.evaluate(grid)
    d2 = second_derivative(state.wave, method="spectral").values
    scale = np.max(np.abs(d2))
    assert np.max(np.abs(d2 - 2.0 * (U - state.energy) * state.values)) < 1e-6 * scale
    assert np.max(np.abs(state.curvature - d2)) < 1e-6 * scale


def test_lattice_target_overlap_diagnostics(grid):
    from ffdrive.algorithms.traps import lattice_target

    split = lattice_target([-1.5, -0.75, 0.0, 0.75, 1.5], 64.0, None, grid)
    assert split.diagnostics["site_overlap"] == pytest.approx(math.exp(-9.0), rel=1e-9)

    crowded = lattice_target([-0.5, 0.5], 4.0, None, grid)
    assert crowded.diagnostics["overlap_warning"] is True

    far = lattice_target([-4.0, 4.0], 16.0, None, grid)
    assert "overlap_warning" not in far.diagnostics


def test_lattice_weights_shape_populations(grid):
    """Weights set site amplitudes: populations scale as w^2."""
    from scipy.integrate import trapezoid
    from ffdrive.algorithms.traps import lattice_target

    state = lattice_target([-3.0, 3.0], 16.0, [1.0, 2.0], grid)
    density = state.values ** 2
    left = trapezoid(density[grid.x < 0], dx=grid.dx)
    right = trapezoid(density[grid.x > 0], dx=grid.dx)
    assert right / left == pytest.approx(4.0, rel=1e-6)
