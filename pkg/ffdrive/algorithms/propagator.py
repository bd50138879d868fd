"""
Split-Operator Propagator

Strang splitting exp(-iV dt/2) exp(-iT dt) exp(-iV dt/2) with the kinetic
factor applied in momentum space and V sampled at the step midpoint.
No renormalization is applied; norm drift and edge density are reported.

Usage:
    from ffdrive.algorithms.propagator import Propagator, PropagationConfig

    config = PropagationConfig(dt=1e-3, source=protocol)
    result = Propagator(grid).propagate(psi0, config, t_f, target=psi_target)
    result.fidelity
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Union

import numpy as np
from scipy.integrate import trapezoid

from ffdrive.algorithms.designer import DesignedProtocol
from ffdrive.algorithms.grid import ComplexWave, Grid, inner, norm, require_same_grid
from ffdrive.constants.thresholds import (
    EDGE_DENSITY_TOL,
    MIN_STEPS_PER_PROTOCOL,
    NORM_WARNING_TOL,
)
from ffdrive.core.errors import ValidationError

logger = logging.getLogger(__name__)

PotentialFunction = Callable[[np.ndarray, float], np.ndarray]
PotentialSource = Union[DesignedProtocol, PotentialFunction]


def static_potential(values: np.ndarray) -> PotentialFunction:
    """Wrap a fixed array as a time-independent potential source."""
    fixed = np.asarray(values, dtype=float)

    def potential(x: np.ndarray, t: float) -> np.ndarray:
        return fixed

    return potential


# ============================================================================
# Config and Result
# ============================================================================

@dataclass(frozen=True)
class PropagationConfig:
    """
    Attributes:
        dt: Requested step (the effective step divides the duration evenly)
        source: DesignedProtocol or callable V(x, t)
        truncated: Use V_truncated of a protocol when present
        record_every: Snapshot stride in steps (0 = initial and final only)
    """

    dt: float
    source: Any
    truncated: bool = True
    record_every: int = 0

    def __post_init__(self):
        if not self.dt > 0:
            raise ValidationError("dt must be positive", details={"dt": self.dt})
        if self.record_every < 0:
            raise ValidationError("record_every must be >= 0", details={"record_every": self.record_every})
        if isinstance(self.source, DesignedProtocol):
            limit = self.source.t_f / MIN_STEPS_PER_PROTOCOL
            if self.dt > limit * (1.0 + 1e-12):
                raise ValidationError(
                    f"dt must be <= t_f/{MIN_STEPS_PER_PROTOCOL} for designed protocols",
                    details={"dt": self.dt, "limit": limit}
                )
        elif not callable(self.source):
            raise ValidationError("Potential source must be a protocol or a callable")


@dataclass(eq=False)
class EvolutionResult:
    final: ComplexWave
    norm_drift: float
    n_steps: int
    dt: float
    fidelity: Optional[float] = None
    snapshot_times: List[float] = field(default_factory=list)
    snapshots: List[ComplexWave] = field(default_factory=list)
    diagnostics: Dict[str, Any] = field(default_factory=dict)


# ============================================================================
# Measurements
# ============================================================================

def fidelity(a: ComplexWave, b: ComplexWave) -> float:
    """|<a|b>|^2; warns when either input is not normalized."""
    require_same_grid(a.grid, b.grid)
    for label, wave in (("a", a), ("b", b)):
        n = norm(wave)
        if abs(n - 1.0) > NORM_WARNING_TOL:
            logger.warning(f"fidelity input {label} has norm {n:.9f}")
    return float(abs(inner(a, b)) ** 2)


def kinetic_apply(values: np.ndarray, grid: Grid) -> np.ndarray:
    """T psi = ifft(k^2/2 fft(psi))."""
    return np.fft.ifft(0.5 * grid.k ** 2 * np.fft.fft(values))


def observables(psi: ComplexWave, potential: Optional[np.ndarray] = None) -> Dict[str, float]:
    """
    norm, <x>, <x^2> and, when a potential is given, <E> with spectral kinetic energy.
    """
    grid = psi.grid
    x = grid.x
    values = psi.values
    density = np.abs(values) ** 2
    n2 = float(trapezoid(density, dx=grid.dx))

    result = {
        "norm": math.sqrt(n2),
        "x_mean": float(trapezoid(x * density, dx=grid.dx)) / n2,
        "x2_mean": float(trapezoid(x ** 2 * density, dx=grid.dx)) / n2,
    }
    if potential is not None:
        h_psi = kinetic_apply(values, grid) + np.asarray(potential) * values
        result["energy"] = float(np.real(trapezoid(np.conj(values) * h_psi, dx=grid.dx))) / n2
    return result


# ============================================================================
# Propagator
# ============================================================================

class Propagator:
    """Strang split-operator stepper on a power-of-two grid."""

    def __init__(self, grid: Grid):
        if not grid.is_power_of_two:
            raise ValidationError(
                "Split-operator propagation needs a power-of-two grid",
                details={"n_points": grid.n_points}
            )
        self.grid = grid
        self._k2 = grid.k ** 2
        self._kinetic_cache: Dict[float, np.ndarray] = {}

    def _kinetic(self, dt: float) -> np.ndarray:
        phase = self._kinetic_cache.get(dt)
        if phase is None:
            phase = np.exp(-0.5j * dt * self._k2)
            self._kinetic_cache[dt] = phase
        return phase

    def step(self, psi: np.ndarray, V_mid: np.ndarray, dt: float) -> np.ndarray:
        """One Strang step; negative dt is the exact inverse step."""
        half = np.exp(-0.5j * dt * V_mid)
        psi = half * psi
        psi = np.fft.ifft(self._kinetic(dt) * np.fft.fft(psi))
        return half * psi

    def _potential_fn(self, source: PotentialSource, truncated: bool, t_end: float) -> Callable[[float], np.ndarray]:
        if isinstance(source, DesignedProtocol):
            require_same_grid(source.grid, self.grid)
            if source.times[0] > 0.0 or source.t_f < t_end * (1.0 - 1e-12):
                raise ValidationError(
                    "Potential movie does not cover the propagation interval",
                    details={"movie_t_f": source.t_f, "t_end": t_end}
                )
            return lambda t: source.potential_at(t, truncated)

        x = self.grid.x
        shape = x.shape
        return lambda t: np.broadcast_to(source(x, t), shape)

    def evolve(
        self,
        psi: np.ndarray,
        potential: Callable[[float], np.ndarray],
        t_start: float,
        t_end: float,
        n_steps: int,
        record_every: int = 0
    ) -> Dict[str, Any]:
        """
        Integrate from t_start to t_end (either direction) in n_steps steps.

        Returns:
            Dict with final values, snapshot times/values and max edge density
        """
        dt = (t_end - t_start) / n_steps
        psi = np.asarray(psi, dtype=complex).copy()
        times = [t_start]
        snaps = [psi.copy()]
        edge = max(abs(psi[0]) ** 2, abs(psi[-1]) ** 2)

        for j in range(n_steps):
            t_mid = t_start + (j + 0.5) * dt
            psi = self.step(psi, potential(t_mid), dt)
            edge = max(edge, abs(psi[0]) ** 2, abs(psi[-1]) ** 2)
            if record_every and (j + 1) % record_every == 0 and j + 1 < n_steps:
                times.append(t_start + (j + 1) * dt)
                snaps.append(psi.copy())

        times.append(t_end)
        snaps.append(psi.copy())
        return {"psi": psi, "times": times, "snapshots": snaps, "edge_density": float(edge)}

    def propagate(
        self,
        psi0: ComplexWave,
        config: PropagationConfig,
        t_f: float,
        target: Optional[ComplexWave] = None
    ) -> EvolutionResult:
        """
        Evolve psi0 over [0, t_f] under the configured potential.

        Args:
            psi0: Initial wave (normalized)
            config: Step, potential source and snapshot stride
            t_f: Duration
            target: Optional target; sets result.fidelity

        Returns:
            EvolutionResult with norm drift | ||psi(t_f)|| - 1 | and edge-density diagnostics
        """
        require_same_grid(psi0.grid, self.grid)
        if not t_f > 0:
            raise ValidationError("t_f must be positive", details={"t_f": t_f})

        potential = self._potential_fn(config.source, config.truncated, t_f)
        n_steps = max(1, int(math.ceil(t_f / config.dt - 1e-9)))
        logger.info(f"Propagating {n_steps} steps (dt={t_f / n_steps:.3e}) to t_f={t_f:.6g}")

        out = self.evolve(psi0.values, potential, 0.0, t_f, n_steps, config.record_every)

        final = ComplexWave(self.grid, out["psi"])
        drift = abs(norm(final) - 1.0)
        diagnostics: Dict[str, Any] = {"edge_density": out["edge_density"]}
        initial_norm = norm(psi0)
        if abs(initial_norm - 1.0) > NORM_WARNING_TOL:
            diagnostics["initial_norm"] = initial_norm
            logger.warning(f"Initial wave not normalized (norm {initial_norm:.8f}); drift is measured against 1")
        if out["edge_density"] > EDGE_DENSITY_TOL:
            diagnostics["edge_warning"] = True
            logger.warning(f"Wave reached the box edge (max edge density {out['edge_density']:.2e})")

        result = EvolutionResult(
            final=final,
            norm_drift=float(drift),
            n_steps=n_steps,
            dt=t_f / n_steps,
            snapshot_times=[float(t) for t in out["times"]],
            snapshots=[ComplexWave(self.grid, v) for v in out["snapshots"]],
            diagnostics=diagnostics,
        )
        if target is not None:
            result.fidelity = fidelity(final, target)
            logger.info(f"Fidelity {result.fidelity:.8f}, norm drift {drift:.2e}")
        return result


def propagate(
    psi0: ComplexWave,
    config: PropagationConfig,
    t_f: float,
    target: Optional[ComplexWave] = None
) -> EvolutionResult:
    return Propagator(psi0.grid).propagate(psi0, config, t_f, target)
