"""
Interpolation Schedules

eta(t): smooth monotone switch 0 -> 1 with vanishing first and second
derivatives at both ends (quintic 10s^3 - 15s^4 + 6s^5 by default).
phi0(t): phase at the origin, a cubic meeting phi0 = 0 at both ends and
phi0' = -E_i, -E_f there ("polynomial" convention) or identically zero
("zero" convention, both endpoint energies shifted to zero).

Both come with analytic derivatives so the designer never differences in time.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from ffdrive.constants.thresholds import SCHEDULE_BOUNDARY_TOL
from ffdrive.core.errors import ValidationError

logger = logging.getLogger(__name__)

EtaFunction = Callable[[float], Tuple[float, float, float]]

PHASE_CONVENTIONS = ("polynomial", "zero")


@dataclass(frozen=True)
class Schedule:
    """
    (eta, phi0) pair for one protocol.

    Attributes:
        t_f: Protocol duration
        E_i: Initial-state energy
        E_f: Final-state energy
        phase_convention: "polynomial" or "zero"
        eta_fn: Optional user schedule t -> (eta, eta', eta''); must pass
            the same boundary checks as the default
    """

    t_f: float
    E_i: float
    E_f: float
    phase_convention: str = "polynomial"
    eta_fn: Optional[EtaFunction] = None

    def __post_init__(self):
        if not np.isfinite(self.t_f) or self.t_f <= 0:
            raise ValidationError("t_f must be positive", details={"t_f": self.t_f})
        if self.phase_convention not in PHASE_CONVENTIONS:
            raise ValidationError(
                f"Unknown phase convention: {self.phase_convention}",
                details={"allowed": list(PHASE_CONVENTIONS)}
            )
        self._check_boundaries()

    @property
    def eta_kind(self) -> str:
        return "user" if self.eta_fn is not None else "polynomial-quintic"

    # ==================== Evaluation ====================

    def _s(self, t: float) -> float:
        tol = SCHEDULE_BOUNDARY_TOL * self.t_f
        if t < -tol or t > self.t_f + tol:
            raise ValidationError(
                "Time outside the protocol interval",
                details={"t": t, "t_f": self.t_f}
            )
        return min(max(t, 0.0), self.t_f) / self.t_f

    def eta(self, t: float) -> Tuple[float, float, float]:
        """(eta, d eta/dt, d2 eta/dt2) at time t."""
        s = self._s(t)
        if self.eta_fn is not None:
            value, d1, d2 = self.eta_fn(s * self.t_f)
            return float(value), float(d1), float(d2)

        tf = self.t_f
        value = s ** 3 * (10.0 - 15.0 * s + 6.0 * s ** 2)
        d1 = 30.0 * s ** 2 * (1.0 - s) ** 2 / tf
        d2 = 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s) / tf ** 2
        return value, d1, d2

    def _phase_coefficients(self) -> Tuple[float, float]:
        if self.phase_convention == "zero":
            return 0.0, 0.0
        return self.E_i + self.E_f, self.E_i

    def phi0(self, t: float) -> Tuple[float, float]:
        """(phi0, d phi0/dt) at time t."""
        s = self._s(t)
        A, B = self._phase_coefficients()
        value = self.t_f * s * (-A * s ** 2 + (A + B) * s - B)
        d1 = -3.0 * A * s ** 2 + 2.0 * (A + B) * s - B
        return value, d1

    def phi0_second(self, t: float) -> float:
        s = self._s(t)
        A, B = self._phase_coefficients()
        return (-6.0 * A * s + 2.0 * (A + B)) / self.t_f

    # ==================== Validation ====================

    def _check_boundaries(self) -> None:
        tol = SCHEDULE_BOUNDARY_TOL
        start = self.eta(0.0)
        end = self.eta(self.t_f)
        failures = {}
        if abs(start[0]) > tol or abs(end[0] - 1.0) > tol:
            failures["eta"] = [start[0], end[0]]
        if abs(start[1]) > tol or abs(end[1]) > tol:
            failures["eta_dot"] = [start[1], end[1]]
        if abs(start[2]) > tol or abs(end[2]) > tol:
            failures["eta_ddot"] = [start[2], end[2]]

        p0 = self.phi0(0.0)
        p1 = self.phi0(self.t_f)
        if abs(p0[0]) > tol * max(1.0, self.t_f) or abs(p1[0]) > tol * max(1.0, self.t_f):
            failures["phi0"] = [p0[0], p1[0]]
        if self.phase_convention == "polynomial":
            if abs(p0[1] + self.E_i) > tol * max(1.0, abs(self.E_i)):
                failures["phi0_dot_start"] = p0[1]
            if abs(p1[1] + self.E_f) > tol * max(1.0, abs(self.E_f)):
                failures["phi0_dot_end"] = p1[1]

        samples = np.array([self.eta(t)[0] for t in np.linspace(0.0, self.t_f, 513)])
        if np.any(np.diff(samples) < -tol):
            failures["monotonic"] = False

        if failures:
            raise ValidationError("Schedule violates its boundary conditions", details=failures)

        logger.debug(f"Schedule ok: t_f={self.t_f:.6g}, E_i={self.E_i:.6g}, E_f={self.E_f:.6g}")
