"""
Constants Package

Centralized constants for ffdrive.

Exports:
- Unit convention and default numerics (grid, n_t, dt, snapshots)
- Output file names and CSV float format
- Exit codes
- Numerical thresholds used by the algorithms

Safe to import anywhere - no heavy dependencies or circular imports.
"""

from .constants import (
    UNITS_HEADER,
    DEFAULT_GRID_HALF_WIDTH,
    DEFAULT_GRID_POINTS,
    DEFAULT_N_T,
    DEFAULT_DT,
    DEFAULT_SNAPSHOTS,
    REFERENCE_OMEGA,
    TWO_PI,
    CSV_FLOAT_FORMAT,
    FILE_POTENTIAL,
    FILE_POTENTIAL_TRUNCATED,
    FILE_RHO,
    FILE_DENSITY,
    FILE_PSI_REAL,
    FILE_PSI_IMAG,
    FILE_SUMMARY,
    FILE_SWEEP_CSV,
    FILE_SWEEP_JSON,
    EXIT_OK,
    EXIT_CONFIG_ERROR,
    EXIT_NUMERIC_ERROR,
    make_run_id,
)

from .thresholds import (
    MIN_GRID_POINTS,
    SPECTRAL_EDGE_RATIO,
    MAX_HERMITE_ORDER,
    EDGE_LEAKAGE_RATIO,
    NODE_COUNT_FLOOR,
    LATTICE_OVERLAP_TOL,
    SCHEDULE_BOUNDARY_TOL,
    DENSITY_FLOOR,
    NODE_MARGIN_DX,
    COLLINEARITY_TOL,
    NORM_WARNING_TOL,
    EDGE_DENSITY_TOL,
    MIN_STEPS_PER_PROTOCOL,
)

__all__ = [
    # Units and defaults
    "UNITS_HEADER",
    "DEFAULT_GRID_HALF_WIDTH",
    "DEFAULT_GRID_POINTS",
    "DEFAULT_N_T",
    "DEFAULT_DT",
    "DEFAULT_SNAPSHOTS",
    "REFERENCE_OMEGA",
    "TWO_PI",
    # Output
    "CSV_FLOAT_FORMAT",
    "FILE_POTENTIAL",
    "FILE_POTENTIAL_TRUNCATED",
    "FILE_RHO",
    "FILE_DENSITY",
    "FILE_PSI_REAL",
    "FILE_PSI_IMAG",
    "FILE_SUMMARY",
    "FILE_SWEEP_CSV",
    "FILE_SWEEP_JSON",
    # Exit codes
    "EXIT_OK",
    "EXIT_CONFIG_ERROR",
    "EXIT_NUMERIC_ERROR",
    "make_run_id",
    # Thresholds
    "MIN_GRID_POINTS",
    "SPECTRAL_EDGE_RATIO",
    "MAX_HERMITE_ORDER",
    "EDGE_LEAKAGE_RATIO",
    "NODE_COUNT_FLOOR",
    "LATTICE_OVERLAP_TOL",
    "SCHEDULE_BOUNDARY_TOL",
    "DENSITY_FLOOR",
    "NODE_MARGIN_DX",
    "COLLINEARITY_TOL",
    "NORM_WARNING_TOL",
    "EDGE_DENSITY_TOL",
    "MIN_STEPS_PER_PROTOCOL",
]
