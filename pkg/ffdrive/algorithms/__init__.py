"""
Algorithms Package

Numerical core of ffdrive:
- grid: uniform grid, fields, quadrature and derivatives
- traps: trap potentials, closed-form and numerical stationary states, lattice targets
- schedule: eta(t) / phi0(t) with analytic derivatives
- designer: rho interpolation, hydrodynamic velocity, potential assembly, truncation
- propagator: Strang split-operator verification, fidelity and observables

All operations are deterministic and return immutable results.
"""

from ffdrive.algorithms.grid import (
    Grid,
    RealField,
    ComplexWave,
    inner,
    norm,
    first_derivative,
    second_derivative,
    cumulative_integral,
)
from ffdrive.algorithms.traps import (
    TrapPotential,
    Eigenstate,
    harmonic_eigenstate,
    solve_stationary,
    lattice_target,
    count_nodes,
)
from ffdrive.algorithms.schedule import Schedule
from ffdrive.algorithms.designer import (
    TrustWindow,
    DesignedProtocol,
    ProtocolDesigner,
    interpolate_rho,
    hydrodynamic_velocity,
    assemble_potential,
    truncate,
    design,
)
from ffdrive.algorithms.propagator import (
    PropagationConfig,
    EvolutionResult,
    Propagator,
    propagate,
    fidelity,
    observables,
    static_potential,
)

__all__ = [
    "Grid",
    "RealField",
    "ComplexWave",
    "inner",
    "norm",
    "first_derivative",
    "second_derivative",
    "cumulative_integral",
    "TrapPotential",
    "Eigenstate",
    "harmonic_eigenstate",
    "solve_stationary",
    "lattice_target",
    "count_nodes",
    "Schedule",
    "TrustWindow",
    "DesignedProtocol",
    "ProtocolDesigner",
    "interpolate_rho",
    "hydrodynamic_velocity",
    "assemble_potential",
    "truncate",
    "design",
    "PropagationConfig",
    "EvolutionResult",
    "Propagator",
    "propagate",
    "fidelity",
    "observables",
    "static_potential",
]
