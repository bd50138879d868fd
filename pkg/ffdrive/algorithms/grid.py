"""
Grid and Field Algebra

Uniform 1D spatial grid plus the operations every other module builds on:
trapezoidal inner products, 5-point finite-difference and spectral derivatives,
and cumulative integrals anchored at x = 0.

Units are hbar = m = 1 throughout the package.

Usage:
    from ffdrive.algorithms.grid import Grid, RealField, inner, second_derivative

    grid = Grid.symmetric(12.0, 1024)
    f = RealField(grid, np.exp(-grid.x ** 2 / 2) * np.pi ** -0.25)
    inner(f, f)                      # ~1.0
    second_derivative(f).values      # ~(x^2 - 1) f
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, Optional, Union

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid

from ffdrive.constants.constants import DEFAULT_GRID_HALF_WIDTH, DEFAULT_GRID_POINTS
from ffdrive.constants.thresholds import MIN_GRID_POINTS, SPECTRAL_EDGE_RATIO
from ffdrive.core.errors import GridMismatchError, ValidationError

logger = logging.getLogger(__name__)


# ============================================================================
# Grid
# ============================================================================

@dataclass(frozen=True)
class Grid:
    """
    Uniform lattice x_i = x_min + i * dx, i = 0..n_points-1.

    Attributes:
        x_min: Left end (inclusive)
        x_max: Right end (inclusive)
        n_points: Number of samples
        spectral: Require a power-of-two length (FFT operations)
    """

    x_min: float
    x_max: float
    n_points: int
    spectral: bool = False

    def __post_init__(self):
        if int(self.n_points) != self.n_points or self.n_points < MIN_GRID_POINTS:
            raise ValidationError(
                f"Grid needs at least {MIN_GRID_POINTS} points",
                details={"n_points": self.n_points}
            )
        if not (np.isfinite(self.x_min) and np.isfinite(self.x_max)) or self.x_max <= self.x_min:
            raise ValidationError(
                "Grid requires finite x_max > x_min",
                details={"x_min": self.x_min, "x_max": self.x_max}
            )
        if self.spectral and not self.is_power_of_two:
            raise ValidationError(
                "Spectral grids need a power-of-two number of points",
                details={"n_points": self.n_points}
            )

    @classmethod
    def symmetric(
        cls,
        half_width: float = DEFAULT_GRID_HALF_WIDTH,
        n_points: int = DEFAULT_GRID_POINTS,
        spectral: bool = True
    ) -> "Grid":
        """
        Periodic-style box [-L, L) with dx = 2L/n.

        With even n the origin is node n/2 and x_i, x_{n-i} are exact mirrors.
        """
        if half_width <= 0:
            raise ValidationError("half_width must be positive", details={"half_width": half_width})
        dx = 2.0 * half_width / n_points
        return cls(x_min=-half_width, x_max=half_width - dx, n_points=n_points, spectral=spectral)

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def is_power_of_two(self) -> bool:
        n = int(self.n_points)
        return n > 0 and (n & (n - 1)) == 0

    @cached_property
    def x(self) -> np.ndarray:
        x = np.linspace(self.x_min, self.x_max, self.n_points)
        i0 = self.origin_index
        if i0 is not None:
            x[i0] = 0.0
        x.flags.writeable = False
        return x

    @cached_property
    def k(self) -> np.ndarray:
        """Angular wavenumbers in FFT order."""
        k = 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.dx)
        k.flags.writeable = False
        return k

    @cached_property
    def origin_index(self) -> Optional[int]:
        """Index of the node at x = 0, or None when 0 falls between nodes."""
        dx = self.dx
        i0 = int(round(-self.x_min / dx))
        if 0 <= i0 < self.n_points and abs(self.x_min + i0 * dx) <= 1e-9 * dx:
            return i0
        return None

    def contains_origin(self) -> bool:
        return self.x_min <= 0.0 <= self.x_max

    def mirror_index(self, i: int) -> Optional[int]:
        """Index of -x_i when it is a node, else None."""
        i0 = self.origin_index
        if i0 is None:
            return None
        j = 2 * i0 - i
        return j if 0 <= j < self.n_points else None

    def compatible(self, other: "Grid") -> bool:
        return (
            self.n_points == other.n_points
            and self.x_min == other.x_min
            and self.x_max == other.x_max
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "x_min": self.x_min,
            "x_max": self.x_max,
            "n_points": self.n_points,
            "dx": self.dx,
            "spectral": self.spectral,
        }


def require_same_grid(a: Grid, b: Grid) -> None:
    if not a.compatible(b):
        raise GridMismatchError(details={"left": a.to_dict(), "right": b.to_dict()})


# ============================================================================
# Fields
# ============================================================================

@dataclass(frozen=True, eq=False)
class RealField:
    """Real (sign-carrying) samples on a grid."""

    grid: Grid
    values: np.ndarray
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (self.grid.n_points,):
            raise ValidationError(
                "Field length does not match grid",
                details={"expected": self.grid.n_points, "got": list(values.shape)}
            )
        if not np.all(np.isfinite(values)):
            raise ValidationError("Field contains non-finite values")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def with_values(self, values: np.ndarray, **diagnostics: Any) -> "RealField":
        return RealField(self.grid, values, dict(diagnostics))


@dataclass(frozen=True, eq=False)
class ComplexWave:
    """Complex wavefunction samples on a grid."""

    grid: Grid
    values: np.ndarray
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        values = np.array(self.values, dtype=complex)
        if values.shape != (self.grid.n_points,):
            raise ValidationError(
                "Wave length does not match grid",
                details={"expected": self.grid.n_points, "got": list(values.shape)}
            )
        if not np.all(np.isfinite(values)):
            raise ValidationError("Wave contains non-finite values")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @classmethod
    def from_real(cls, f: RealField) -> "ComplexWave":
        return cls(f.grid, f.values.astype(complex))

    @property
    def density(self) -> np.ndarray:
        return np.abs(self.values) ** 2


Field = Union[RealField, ComplexWave]


# ============================================================================
# Quadrature
# ============================================================================

def inner(a: Field, b: Field) -> Union[float, complex]:
    """
    Trapezoidal <a|b> = integral of conj(a) b dx.

    Returns a float when both fields are real.
    """
    require_same_grid(a.grid, b.grid)
    value = trapezoid(np.conj(a.values) * b.values, dx=a.grid.dx)
    if isinstance(a, RealField) and isinstance(b, RealField):
        return float(np.real(value))
    return complex(value)


def norm(f: Field) -> float:
    """L2 norm sqrt(<f|f>)."""
    return float(np.sqrt(np.real(trapezoid(np.abs(f.values) ** 2, dx=f.grid.dx))))


def cumulative_values(values: np.ndarray, grid: Grid) -> np.ndarray:
    """
    F(x) = integral from 0 to x of f, trapezoidal, F(0) = 0.

    Accumulates outward from the anchor on each side, so mirror-symmetric
    integrands give mirror-antisymmetric results bit for bit.
    """
    if not grid.contains_origin():
        raise ValidationError(
            "Cumulative integral needs x = 0 inside the grid",
            details=grid.to_dict()
        )
    f = np.asarray(values, dtype=float)
    out = np.empty_like(f)
    i0 = grid.origin_index

    if i0 is not None:
        out[i0:] = cumulative_trapezoid(f[i0:], dx=grid.dx, initial=0.0)
        left = cumulative_trapezoid(f[i0::-1], dx=grid.dx, initial=0.0)
        out[:i0 + 1] = -left[::-1]
        return out

    # origin between nodes j and j+1
    x = grid.x
    j = int(np.searchsorted(x, 0.0)) - 1
    w = -x[j] / grid.dx
    f0 = (1.0 - w) * f[j] + w * f[j + 1]

    right_x = np.concatenate(([0.0], x[j + 1:]))
    right_f = np.concatenate(([f0], f[j + 1:]))
    out[j + 1:] = cumulative_trapezoid(right_f, x=right_x)

    left_x = np.concatenate(([0.0], -x[j::-1]))
    left_f = np.concatenate(([f0], f[j::-1]))
    out[:j + 1] = -cumulative_trapezoid(left_f, x=left_x)[::-1]
    return out


def cumulative_integral(f: RealField) -> RealField:
    """Field form of cumulative_values."""
    return RealField(f.grid, cumulative_values(f.values, f.grid))


def edge_anchored_values(values: np.ndarray, grid: Grid) -> np.ndarray:
    """
    Integral of f accumulated inward from both box edges.

    G(x) = integral from x_min to x of f for x < 0 and -(integral from x to
    x_max) for x > 0; the two branches are averaged at the origin node.
    Equals cumulative_values plus a constant when f integrates to zero.
    """
    f = np.asarray(values, dtype=float)
    out = np.empty_like(f)
    from_left = cumulative_trapezoid(f, dx=grid.dx, initial=0.0)
    from_right = -cumulative_trapezoid(f[::-1], dx=grid.dx, initial=0.0)[::-1]

    i0 = grid.origin_index
    if i0 is not None:
        out[:i0] = from_left[:i0]
        out[i0 + 1:] = from_right[i0 + 1:]
        out[i0] = 0.5 * (from_left[i0] + from_right[i0])
    else:
        split = int(np.searchsorted(grid.x, 0.0))
        out[:split] = from_left[:split]
        out[split:] = from_right[split:]
    return out


# ============================================================================
# Derivatives
# ============================================================================

def first_derivative_values(f: np.ndarray, dx: float) -> np.ndarray:
    """5-point centered first derivative, one-sided 5-point at the edges."""
    f = np.asarray(f, dtype=float)
    d = np.empty_like(f)
    d[2:-2] = (f[:-4] - 8.0 * f[1:-3] + 8.0 * f[3:-1] - f[4:]) / (12.0 * dx)
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * dx)
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * dx)
    d[-2] = (-f[-5] + 6.0 * f[-4] - 18.0 * f[-3] + 10.0 * f[-2] + 3.0 * f[-1]) / (12.0 * dx)
    d[-1] = (3.0 * f[-5] - 16.0 * f[-4] + 36.0 * f[-3] - 48.0 * f[-2] + 25.0 * f[-1]) / (12.0 * dx)
    return d


def second_derivative_values(f: np.ndarray, dx: float) -> np.ndarray:
    """5-point centered second derivative, one-sided 5-point at the edges."""
    f = np.asarray(f, dtype=float)
    h2 = 12.0 * dx * dx
    d = np.empty_like(f)
    d[2:-2] = (-f[:-4] + 16.0 * f[1:-3] - 30.0 * f[2:-2] + 16.0 * f[3:-1] - f[4:]) / h2
    d[0] = (35.0 * f[0] - 104.0 * f[1] + 114.0 * f[2] - 56.0 * f[3] + 11.0 * f[4]) / h2
    d[1] = (11.0 * f[0] - 20.0 * f[1] + 6.0 * f[2] + 4.0 * f[3] - f[4]) / h2
    d[-2] = (-f[-5] + 4.0 * f[-4] + 6.0 * f[-3] - 20.0 * f[-2] + 11.0 * f[-1]) / h2
    d[-1] = (11.0 * f[-5] - 56.0 * f[-4] + 114.0 * f[-3] - 104.0 * f[-2] + 35.0 * f[-1]) / h2
    return d


def first_derivative(f: RealField) -> RealField:
    return RealField(f.grid, first_derivative_values(f.values, f.grid.dx))


def second_derivative(f: RealField, method: str = "finite-difference") -> RealField:
    """
    d2f/dx2 on the same grid.

    Args:
        f: Field to differentiate
        method: "finite-difference" or "spectral"

    Returns:
        RealField; spectral results carry an "edge_leakage" diagnostic when f
        does not decay at the box edges.
    """
    grid = f.grid
    if method == "finite-difference":
        return RealField(grid, second_derivative_values(f.values, grid.dx))

    if method != "spectral":
        raise ValidationError(f"Unknown derivative method: {method}")
    if not grid.is_power_of_two:
        raise ValidationError(
            "Spectral derivative needs a power-of-two grid",
            details={"n_points": grid.n_points}
        )

    values = np.real(np.fft.ifft(-(grid.k ** 2) * np.fft.fft(f.values)))
    diagnostics: Dict[str, Any] = {}
    scale = float(np.max(np.abs(f.values))) if f.values.size else 0.0
    edge = max(abs(f.values[0]), abs(f.values[-1]))
    if scale > 0 and edge > SPECTRAL_EDGE_RATIO * scale:
        diagnostics["edge_leakage"] = float(edge / scale)
        logger.warning(f"Spectral derivative of non-decaying field (edge ratio {edge / scale:.3e})")
    return RealField(grid, values, diagnostics)
