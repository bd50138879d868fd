"""
Threshold Constants

Numerical tolerances used by the algorithms package.

IMPORTANT: These values MUST stay in sync with algorithm implementations.
Values are documented with SYNC comments showing which module uses them.
"""

# ============================================================================
# Grid Thresholds
# SYNC WITH: ffdrive/algorithms/grid.py
# ============================================================================

MIN_GRID_POINTS = 16

# Spectral derivative: edges must decay below this fraction of max|f|
SPECTRAL_EDGE_RATIO = 1e-10  # SYNC: grid.second_derivative


# ============================================================================
# Trap / Eigensolver Thresholds
# SYNC WITH: ffdrive/algorithms/traps.py
# ============================================================================

# Hermite recursion validity window for closed-form eigenstates
MAX_HERMITE_ORDER = 20

# Eigenvector edge amplitude relative to its maximum
EDGE_LEAKAGE_RATIO = 1e-8  # SYNC: traps.solve_stationary

# Relative floor below which samples are ignored when counting nodes
NODE_COUNT_FLOOR = 1e-6

# Adjacent lattice-site overlap above which the target is not a product of
# independent ground states
LATTICE_OVERLAP_TOL = 1e-6  # SYNC: traps.lattice_target


# ============================================================================
# Schedule Thresholds
# SYNC WITH: ffdrive/algorithms/schedule.py
# ============================================================================

SCHEDULE_BOUNDARY_TOL = 1e-12


# ============================================================================
# Designer Thresholds
# SYNC WITH: ffdrive/algorithms/designer.py
# ============================================================================

# Trust window density floor
DENSITY_FLOOR = 1e-8

# Node-exclusion margin in grid spacings
NODE_MARGIN_DX = 2.0

# Integrals across a node: window points fitted on each side (at most / at
# least) and half-width of the interval integrated through the local model
NODE_FIT_POINTS = 8  # SYNC: designer.finite_part_cumulative
NODE_FIT_MIN_POINTS = 4
NODE_BRIDGE_DX = 40

# Normalization denominator below which endpoints count as anti-collinear
COLLINEARITY_TOL = 1e-12


# ============================================================================
# Propagator Thresholds
# SYNC WITH: ffdrive/algorithms/propagator.py
# ============================================================================

# fidelity() warns when an input norm deviates by more than this
NORM_WARNING_TOL = 1e-6

# |psi|^2 at the box edges above this is reported
EDGE_DENSITY_TOL = 1e-10

# Designed protocols need dt <= t_f / MIN_STEPS_PER_PROTOCOL
MIN_STEPS_PER_PROTOCOL = 1000
