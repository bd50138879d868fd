"""
Global Constants

Unit convention, default numerics and output layout shared by the CLI,
the runner and the HTTP surface.

These are fallback defaults; per-run values come from the scenario file and
environment overrides come from core.config.
"""

import math
import uuid
from typing import Optional

# ============================================================================
# Units
# ============================================================================

# hbar = m = 1; lengths in a0 = (hbar / m w0)^(1/2), energies in hbar w0
UNITS_HEADER = "hbar=m=1"


# ============================================================================
# Default Numerics
# ============================================================================

# Symmetric box [-12, 12) with the origin on a grid node
DEFAULT_GRID_HALF_WIDTH = 12.0
DEFAULT_GRID_POINTS = 1024

# Designer time slices per protocol
DEFAULT_N_T = 2000

# Propagator step
DEFAULT_DT = 1e-3

# Recorded snapshot times per run
DEFAULT_SNAPSHOTS = 9

# Reference trap frequency (the frequency unit)
REFERENCE_OMEGA = 1.0

TWO_PI = 2.0 * math.pi


# ============================================================================
# Output Layout
# ============================================================================

CSV_FLOAT_FORMAT = "%.17g"

FILE_POTENTIAL = "V.csv"
FILE_POTENTIAL_TRUNCATED = "V_trun.csv"
FILE_RHO = "rho.csv"
FILE_DENSITY = "density.csv"
FILE_PSI_REAL = "psi_re.csv"
FILE_PSI_IMAG = "psi_im.csv"
FILE_SUMMARY = "summary.json"
FILE_SWEEP_CSV = "sweep.csv"
FILE_SWEEP_JSON = "sweep.json"


# ============================================================================
# Exit Codes
# ============================================================================

EXIT_OK = 0
EXIT_CONFIG_ERROR = 2
EXIT_NUMERIC_ERROR = 3


# ============================================================================
# Helper Functions
# ============================================================================

def make_run_id(name: Optional[str]) -> str:
    """
    Build a run id from the scenario name and a short uuid.

    Example:
        >>> make_run_id("expansion").startswith("expansion-")
        True
    """
    base = (name or "scenario").strip() or "scenario"
    return f"{base}-{uuid.uuid4().hex[:8]}"
