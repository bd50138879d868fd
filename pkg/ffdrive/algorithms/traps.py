"""
Trap Potentials and Stationary States

Catalog of 1D traps (harmonic, linear, lattice of harmonic sites, tabulated)
and their stationary states:
- harmonic_eigenstate: closed-form Hermite-Gaussian states
- solve_stationary: lowest eigenpairs of the 3-point tridiagonal Hamiltonian
- lattice_target: normalized superposition of displaced harmonic ground states

Every state carries its curvature psi'' = 2(U - E) psi from the stationary
equation, which the designer uses instead of differentiating samples.

Usage:
    from ffdrive.algorithms.traps import TrapPotential, solve_stationary

    trap = TrapPotential.linear(1.5)
    ground = solve_stationary(trap, 1, grid)[0]
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Literal, Optional, Sequence

import numpy as np
from numpy.polynomial.hermite import hermval
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.integrate import trapezoid
from scipy.linalg import eigh_tridiagonal
from scipy.special import softmax

from ffdrive.algorithms.grid import Grid, RealField, second_derivative_values
from ffdrive.constants.thresholds import (
    EDGE_LEAKAGE_RATIO,
    LATTICE_OVERLAP_TOL,
    MAX_HERMITE_ORDER,
    NODE_COUNT_FLOOR,
)
from ffdrive.core.errors import ValidationError

logger = logging.getLogger(__name__)

TrapKind = Literal["harmonic", "linear", "lattice", "tabulated"]


# ============================================================================
# Trap Potential
# ============================================================================

class TrapPotential(BaseModel):
    """
    Declarative trap U(x).

    harmonic: U = omega^2 x^2 / 2
    linear: U = slope |x|
    lattice: smooth minimum of site parabolas, the potential for which the
        lattice target is exactly stationary with energy omega_site / 2
    tabulated: U given sample by sample on the run grid
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: TrapKind = Field(..., description="Trap family")
    omega: Optional[float] = Field(None, gt=0, description="Harmonic angular frequency")
    slope: Optional[float] = Field(None, gt=0, description="Linear trap slope k")
    centers: Optional[List[float]] = Field(None, description="Lattice site positions")
    omega_site: Optional[float] = Field(None, gt=0, description="Lattice site frequency")
    weights: Optional[List[float]] = Field(None, description="Lattice amplitude weights")
    values: Optional[List[float]] = Field(None, description="Tabulated samples")

    @model_validator(mode="after")
    def _check_kind(self) -> "TrapPotential":
        if self.kind == "harmonic" and self.omega is None:
            raise ValueError("harmonic trap needs omega")
        if self.kind == "linear" and self.slope is None:
            raise ValueError("linear trap needs slope")
        if self.kind == "lattice":
            if not self.centers or self.omega_site is None:
                raise ValueError("lattice trap needs centers and omega_site")
            if any(b <= a for a, b in zip(self.centers, self.centers[1:])):
                raise ValueError("lattice centers must be strictly increasing")
            if self.weights is not None:
                if len(self.weights) != len(self.centers):
                    raise ValueError("lattice weights must match centers")
                if any(w <= 0 for w in self.weights):
                    raise ValueError("lattice weights must be positive")
        if self.kind == "tabulated":
            if not self.values:
                raise ValueError("tabulated trap needs values")
            if not all(math.isfinite(v) for v in self.values):
                raise ValueError("tabulated trap values must be finite")
        return self

    # ---------- constructors ----------

    @classmethod
    def harmonic(cls, omega: float) -> "TrapPotential":
        return cls(kind="harmonic", omega=omega)

    @classmethod
    def linear(cls, slope: float) -> "TrapPotential":
        return cls(kind="linear", slope=slope)

    @classmethod
    def lattice(
        cls,
        centers: Sequence[float],
        omega_site: float,
        weights: Optional[Sequence[float]] = None
    ) -> "TrapPotential":
        return cls(
            kind="lattice",
            centers=list(centers),
            omega_site=omega_site,
            weights=list(weights) if weights is not None else None,
        )

    @classmethod
    def tabulated(cls, values: Sequence[float]) -> "TrapPotential":
        return cls(kind="tabulated", values=[float(v) for v in values])

    # ---------- evaluation ----------

    def site_weights(self) -> np.ndarray:
        """Lattice amplitude weights, equal 1/sqrt(m) when not given."""
        centers = self.centers or []
        if self.weights is None:
            return np.full(len(centers), 1.0 / math.sqrt(len(centers)))
        return np.asarray(self.weights, dtype=float)

    def evaluate(self, grid: Grid) -> np.ndarray:
        """Sample U on the grid."""
        x = grid.x
        if self.kind == "harmonic":
            return 0.5 * self.omega ** 2 * x ** 2
        if self.kind == "linear":
            return self.slope * np.abs(x)
        if self.kind == "lattice":
            omega = self.omega_site
            offsets = x[None, :] - np.asarray(self.centers)[:, None]
            logits = np.log(self.site_weights())[:, None] - 0.5 * omega * offsets ** 2
            shares = softmax(logits, axis=0)
            return np.sum(shares * 0.5 * omega ** 2 * offsets ** 2, axis=0)

        values = np.asarray(self.values, dtype=float)
        if values.shape != (grid.n_points,):
            raise ValidationError(
                "Tabulated trap length does not match grid",
                details={"expected": grid.n_points, "got": int(values.size)}
            )
        return values

    def describe(self) -> str:
        if self.kind == "harmonic":
            return f"harmonic(omega={self.omega:g})"
        if self.kind == "linear":
            return f"linear(slope={self.slope:g})"
        if self.kind == "lattice":
            return f"lattice({len(self.centers or [])} sites, omega_site={self.omega_site:g})"
        return f"tabulated({len(self.values or [])} samples)"


# ============================================================================
# Eigenstate
# ============================================================================

@dataclass(frozen=True, eq=False)
class Eigenstate:
    """
    Stationary state on a grid.

    Attributes:
        wave: Real, sign-carrying amplitude
        energy: Eigenvalue E
        quantum_number: Level index n
        trap: Trap the state is stationary in
        curvature: psi'' = 2 (U - E) psi
        diagnostics: nodes, residual, edge leakage, overlap warnings
    """

    wave: RealField
    energy: float
    quantum_number: int
    trap: TrapPotential
    curvature: np.ndarray
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    @property
    def grid(self) -> Grid:
        return self.wave.grid

    @property
    def values(self) -> np.ndarray:
        return self.wave.values


def count_nodes(values: np.ndarray, floor: float = NODE_COUNT_FLOOR) -> int:
    """Sign changes between samples above floor * max|values|."""
    v = np.asarray(values, dtype=float)
    scale = float(np.max(np.abs(v))) if v.size else 0.0
    if scale == 0.0:
        return 0
    signs = np.sign(v[np.abs(v) > floor * scale])
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def node_positions(values: np.ndarray, grid: Grid, floor: float = NODE_COUNT_FLOOR) -> List[float]:
    """Linearly interpolated zero crossings among significant samples."""
    v = np.asarray(values, dtype=float)
    scale = float(np.max(np.abs(v))) if v.size else 0.0
    if scale == 0.0:
        return []
    idx = np.flatnonzero(np.abs(v) > floor * scale)
    x = grid.x
    nodes = []
    for a, b in zip(idx[:-1], idx[1:]):
        if np.sign(v[a]) != np.sign(v[b]):
            nodes.append(float(x[a] + (x[b] - x[a]) * v[a] / (v[a] - v[b])))
    return nodes


def stationary_residual(state: Eigenstate, stencil: str = "five-point") -> float:
    """
    Relative residual ||(-1/2 d2/dx2 + U - E) psi|| / ||psi|| on the interior.

    stencil "three-point" applies the solver's own Dirichlet matrix.
    """
    grid = state.grid
    psi = state.values
    U = state.trap.evaluate(grid)
    if stencil == "three-point":
        dx2 = grid.dx ** 2
        lap = -2.0 * psi
        lap[:-1] += psi[1:]
        lap[1:] += psi[:-1]
        r = -0.5 * lap / dx2 + (U - state.energy) * psi
        inner_slice = slice(1, -1)
    else:
        r = -0.5 * second_derivative_values(psi, grid.dx) + (U - state.energy) * psi
        inner_slice = slice(2, -2)

    num = trapezoid(r[inner_slice] ** 2, dx=grid.dx)
    den = trapezoid(psi ** 2, dx=grid.dx)
    return float(np.sqrt(num / den)) if den > 0 else float("inf")


# ============================================================================
# Closed-form Harmonic States
# ============================================================================

def harmonic_eigenstate(omega: float, n: int, grid: Grid) -> Eigenstate:
    """
    Hermite-Gaussian eigenstate of U = omega^2 x^2 / 2.

    Args:
        omega: Angular frequency (> 0)
        n: Quantum number, 0 <= n <= 20
        grid: Sampling grid

    Returns:
        Eigenstate with E = omega (n + 1/2), positive as x -> +inf
    """
    if omega <= 0:
        raise ValidationError("omega must be positive", details={"omega": omega})
    if n < 0 or n > MAX_HERMITE_ORDER:
        raise ValidationError(
            f"Closed-form states are limited to n <= {MAX_HERMITE_ORDER}; use solve_stationary",
            details={"n": n}
        )

    x = grid.x
    xi = math.sqrt(omega) * x
    coeffs = [0.0] * n + [1.0]
    pref = (omega / math.pi) ** 0.25 / math.sqrt((2.0 ** n) * math.factorial(n))
    psi = pref * hermval(xi, coeffs) * np.exp(-0.5 * xi ** 2)

    curvature = (omega ** 2 * x ** 2 - omega * (2 * n + 1)) * psi
    return Eigenstate(
        wave=RealField(grid, psi),
        energy=omega * (n + 0.5),
        quantum_number=n,
        trap=TrapPotential.harmonic(omega),
        curvature=curvature,
        diagnostics={"source": "analytic", "nodes": count_nodes(psi)},
    )


# ============================================================================
# Numerical Eigensolver
# ============================================================================

def _fix_sign(v: np.ndarray) -> np.ndarray:
    """Make the rightmost significant lobe positive."""
    significant = np.flatnonzero(np.abs(v) > 1e-3 * np.max(np.abs(v)))
    if significant.size and v[significant[-1]] < 0:
        return -v
    return v


def solve_stationary(trap: TrapPotential, n_states: int, grid: Grid) -> List[Eigenstate]:
    """
    Lowest n_states eigenpairs of -1/2 d2/dx2 + U with Dirichlet edges.

    Args:
        trap: Trap potential
        n_states: Number of states (>= 1)
        grid: Sampling grid

    Returns:
        Eigenstates in ascending energy, normalized, sign-fixed, with
        residual and edge-leakage diagnostics
    """
    if n_states < 1 or n_states > grid.n_points:
        raise ValidationError("n_states out of range", details={"n_states": n_states})

    U = trap.evaluate(grid)
    if not np.all(np.isfinite(U)):
        raise ValidationError("Trap is not finite on the grid", details={"trap": trap.describe()})

    dx = grid.dx
    diag = np.full(grid.n_points, 1.0 / dx ** 2) + U
    off = np.full(grid.n_points - 1, -0.5 / dx ** 2)

    energies, vectors = eigh_tridiagonal(diag, off, select="i", select_range=(0, n_states - 1))
    logger.debug(f"Tridiagonal solve for {trap.describe()}: E = {np.round(energies, 6).tolist()}")

    states: List[Eigenstate] = []
    for n in range(n_states):
        v = vectors[:, n]
        v = v / math.sqrt(trapezoid(v ** 2, dx=dx))
        v = _fix_sign(v)
        energy = float(energies[n])

        diagnostics: Dict[str, Any] = {"source": "tridiagonal", "nodes": count_nodes(v)}
        peak = float(np.max(np.abs(v)))
        edge_ratio = max(abs(v[0]), abs(v[-1])) / peak
        if edge_ratio > EDGE_LEAKAGE_RATIO:
            diagnostics["edge_leakage"] = float(edge_ratio)
            logger.warning(f"State n={n} of {trap.describe()} reaches the box edge (ratio {edge_ratio:.2e})")

        state = Eigenstate(
            wave=RealField(grid, v),
            energy=energy,
            quantum_number=n,
            trap=trap,
            curvature=2.0 * (U - energy) * v,
            diagnostics=diagnostics,
        )
        diagnostics["residual"] = stationary_residual(state, stencil="three-point")
        states.append(state)

    return states


# ============================================================================
# Lattice Target
# ============================================================================

def lattice_target(
    centers: Sequence[float],
    omega_site: float,
    weights: Optional[Sequence[float]],
    grid: Grid
) -> Eigenstate:
    """
    Normalized equal-phase sum of displaced ground states.

    Nominal energy is omega_site / 2; the attached trap is the lattice kind,
    in which the target is exactly stationary.
    """
    trap = TrapPotential.lattice(centers, omega_site, weights)
    c = np.asarray(trap.centers, dtype=float)
    w = trap.site_weights()
    x = grid.x

    offsets = x[None, :] - c[:, None]
    gauss = (omega_site / math.pi) ** 0.25 * np.exp(-0.5 * omega_site * offsets ** 2)
    psi = np.sum(w[:, None] * gauss, axis=0)
    curvature = np.sum(w[:, None] * gauss * (omega_site ** 2 * offsets ** 2 - omega_site), axis=0)

    scale = math.sqrt(trapezoid(psi ** 2, dx=grid.dx))
    psi = psi / scale
    curvature = curvature / scale

    diagnostics: Dict[str, Any] = {"source": "lattice", "nodes": count_nodes(psi)}
    if c.size > 1:
        overlap = float(np.max(np.exp(-0.25 * omega_site * np.diff(c) ** 2)))
        diagnostics["site_overlap"] = overlap
        if overlap > LATTICE_OVERLAP_TOL:
            logger.warning(
                f"Lattice sites overlap ({overlap:.2e} > {LATTICE_OVERLAP_TOL:g}); "
                f"target is not a set of independent ground states"
            )
            diagnostics["overlap_warning"] = True

    return Eigenstate(
        wave=RealField(grid, psi),
        energy=0.5 * omega_site,
        quantum_number=0,
        trap=trap,
        curvature=curvature,
        diagnostics=diagnostics,
    )
