"""
Protocol Designer

Builds the driving potential that carries an initial stationary state into a
target state in a prescribed time:

1. rho(x, t) = N(t) [(1 - eta) a_i + eta a_f], with a = |psi| (positive mode)
   or a = psi (signed mode); N(t) keeps rho normalized.
2. u(x, t) = [integral of d(rho^2)/dt] / rho^2, the hydrodynamic velocity
   (u is minus the flow velocity: d(rho^2)/dt = d(rho^2 u)/dx).
3. V = d/dt integral_0^x u + rho'' / (2 rho) - u^2 / 2 - d phi0/dt.
4. Optional truncation V -> clip(V, -c, c).

All time derivatives go through the analytic chain rule on (eta, N) so no
time differencing enters the production path. Points where rho is tiny or
close to a node fall outside a per-slice trust window; there u and V are
clamped to the nearest window value.

Usage:
    from ffdrive.algorithms.designer import ProtocolDesigner

    designer = ProtocolDesigner(initial, final, schedule, mode="signed")
    protocol = designer.design(n_t=2000, workers=4).with_truncation(8.0)
"""

import contextvars
import logging
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from joblib import Parallel, delayed
from scipy.integrate import trapezoid

from ffdrive.algorithms.grid import (
    Grid,
    RealField,
    cumulative_values,
    edge_anchored_values,
    require_same_grid,
    second_derivative_values,
)
from ffdrive.algorithms.schedule import Schedule
from ffdrive.algorithms.traps import Eigenstate, count_nodes
from ffdrive.constants.constants import DEFAULT_N_T
from ffdrive.constants.thresholds import (
    COLLINEARITY_TOL,
    DENSITY_FLOOR,
    NODE_BRIDGE_DX,
    NODE_FIT_MIN_POINTS,
    NODE_FIT_POINTS,
    NODE_MARGIN_DX,
)
from ffdrive.core.errors import (
    AppError,
    CollinearityError,
    EmptyWindowError,
    NumericError,
    ValidationError,
)

logger = logging.getLogger(__name__)

INTERPOLATION_MODES = ("positive", "signed")
FLUX_ANCHORS = ("edges", "origin")


# ============================================================================
# Slice Types
# ============================================================================

@dataclass(frozen=True, eq=False)
class TrustWindow:
    """
    Grid points where the potential formula is numerically meaningful.

    Attributes:
        threshold: Density floor on |rho|
        mask: True where |rho| > threshold and no node lies within the margin
        nodes: Node positions of rho at this instant
    """

    threshold: float
    mask: np.ndarray
    nodes: Tuple[float, ...] = ()

    @property
    def fraction(self) -> float:
        return float(np.mean(self.mask))

    @property
    def is_empty(self) -> bool:
        return not bool(np.any(self.mask))

    @classmethod
    def from_rho(
        cls,
        rho: np.ndarray,
        grid: Grid,
        threshold: float = DENSITY_FLOOR,
        margin_dx: float = NODE_MARGIN_DX
    ) -> "TrustWindow":
        rho = np.asarray(rho, dtype=float)
        x = grid.x
        significant = np.abs(rho) > threshold

        nodes: List[float] = []
        a, b = rho[:-1], rho[1:]
        crossing = np.flatnonzero((a * b < 0) & (significant[:-1] | significant[1:]))
        for i in crossing:
            nodes.append(float(x[i] + (x[i + 1] - x[i]) * a[i] / (a[i] - b[i])))

        near = np.zeros_like(significant)
        near[1:] |= significant[:-1]
        near[:-1] |= significant[1:]
        zeros = np.flatnonzero((rho == 0.0) & near)
        nodes.extend(float(x[i]) for i in zeros)
        nodes.sort()

        mask = significant.copy()
        margin = margin_dx * grid.dx
        for xn in nodes:
            mask &= np.abs(x - xn) > margin

        mask.flags.writeable = False
        return cls(threshold=threshold, mask=mask, nodes=tuple(nodes))


@dataclass(frozen=True, eq=False)
class RhoSlice:
    """rho and its analytic derivatives at one instant."""

    t: float
    eta: float
    N: float
    rho: np.ndarray
    drho_dt: np.ndarray
    d2rho_dt2: np.ndarray
    d2rho_dx2: np.ndarray


def clamp_outside(values: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """
    Replace values outside mask by the nearest in-mask value.

    Points equidistant from two window points take their average.
    """
    idx = np.flatnonzero(mask)
    if idx.size == 0:
        raise EmptyWindowError()
    n = values.size
    pos_all = np.arange(n)
    pos = np.searchsorted(idx, pos_all)
    left = idx[np.clip(pos - 1, 0, idx.size - 1)]
    right = idx[np.clip(pos, 0, idx.size - 1)]
    d_left = np.abs(pos_all - left)
    d_right = np.abs(right - pos_all)

    out = np.where(d_left < d_right, values[left], values[right])
    tie = d_left == d_right
    out[tie] = 0.5 * (values[left][tie] + values[right][tie])
    out[mask] = values[mask]
    return out


def _anchored_integral(values: np.ndarray, grid: Grid, flux_anchor: str) -> np.ndarray:
    if flux_anchor == "edges":
        return edge_anchored_values(values, grid)
    return cumulative_values(values, grid)


# ============================================================================
# Integrals Across Nodes
# ============================================================================

@dataclass(frozen=True, eq=False)
class NodeFit:
    """
    Local model of a field around one node of rho.

    f ~ c3/z^3 + c2/z^2 + c1/z + p0 + p1 z + p2 z^2 with z = (x - node) / scale.

    Attributes:
        node: Node position
        scale: Length unit of z (largest fitted distance from the node)
        coef: (c3, c2, c1, p0, p1, p2)
        left: Last window index before the excluded band
        right: First window index after it
        lo: First grid index integrated through the model
        hi: Last grid index integrated through the model
    """

    node: float
    scale: float
    coef: np.ndarray
    left: int
    right: int
    lo: int
    hi: int

    def singular(self, z: np.ndarray) -> np.ndarray:
        c3, c2, c1 = self.coef[:3]
        return c3 * z ** -3 + c2 * z ** -2 + c1 / z

    def singular_antiderivative(self, z: np.ndarray) -> np.ndarray:
        c3, c2, c1 = self.coef[:3]
        return self.scale * (-0.5 * c3 * z ** -2 - c2 / z + c1 * np.log(np.abs(z)))

    def regular(self, z: np.ndarray) -> np.ndarray:
        p0, p1, p2 = self.coef[3:]
        return p0 + p1 * z + p2 * z ** 2

    def cell_integrals(self, f: np.ndarray, grid: Grid) -> np.ndarray:
        """
        Integrals of f over the cells [x_i, x_i+1], lo <= i < hi.

        Trapezoid rule on f minus its singular part (the quadratic inside the
        band) plus the closed-form singular antiderivative; across the band
        this is the finite part of the integral.
        """
        idx = np.arange(self.lo, self.hi + 1)
        x = grid.x[idx]
        z = (x - self.node) / self.scale
        band = (idx > self.left) & (idx < self.right)
        off = ~band

        remainder = np.empty(idx.size)
        remainder[off] = f[idx[off]] - self.singular(z[off])
        remainder[band] = self.regular(z[band])

        S = np.empty(idx.size)
        S[off] = self.singular_antiderivative(z[off])
        if np.any(band):
            ends = [self.left - self.lo, self.right - self.lo]
            S[band] = np.interp(x[band], x[ends], S[ends])

        return 0.5 * grid.dx * (remainder[:-1] + remainder[1:]) + np.diff(S)


def _window_run(mask: np.ndarray, start: int, step: int, lo: int, hi: int) -> List[int]:
    run: List[int] = []
    i = start
    while lo <= i <= hi and mask[i] and len(run) < NODE_FIT_POINTS:
        run.append(i)
        i += step
    return run


def _fit_node(node: float, f: np.ndarray, mask: np.ndarray, grid: Grid, lo: int, hi: int) -> Optional[NodeFit]:
    x = grid.x
    right = int(np.searchsorted(x, node, side="right"))
    left = right - 1
    while left >= lo and not mask[left]:
        left -= 1
    while right <= hi and not mask[right]:
        right += 1
    if left < lo or right > hi:
        return None

    left_run = _window_run(mask, left, -1, lo, hi)
    right_run = _window_run(mask, right, 1, lo, hi)
    if min(len(left_run), len(right_run)) < NODE_FIT_MIN_POINTS:
        return None

    idx = np.array(left_run[::-1] + right_run)
    y = x[idx] - node
    scale = float(np.max(np.abs(y)))
    z = y / scale
    basis = np.column_stack([z ** -3, z ** -2, 1.0 / z, np.ones_like(z), z, z ** 2])
    coef = np.linalg.lstsq(basis, f[idx], rcond=None)[0]
    if not np.all(np.isfinite(coef)):
        return None

    center = (node - x[0]) / grid.dx
    half = int(NODE_BRIDGE_DX)
    return NodeFit(
        node=float(node),
        scale=scale,
        coef=coef,
        left=left,
        right=right,
        lo=max(lo, min(left, int(np.floor(center)) - half)),
        hi=min(hi, max(right, int(np.ceil(center)) + half)),
    )


def node_fits(values: np.ndarray, window: TrustWindow, grid: Grid) -> List[NodeFit]:
    """Local models around every node with enough window points on both sides."""
    nodes = window.nodes
    if not nodes:
        return []
    x0, dx = float(grid.x[0]), grid.dx
    cuts = [int(np.floor((0.5 * (a + b) - x0) / dx)) for a, b in zip(nodes[:-1], nodes[1:])]

    fits: List[NodeFit] = []
    for k, node in enumerate(nodes):
        lo = cuts[k - 1] + 1 if k > 0 else 0
        hi = cuts[k] if k < len(cuts) else grid.n_points - 1
        fit = _fit_node(node, values, window.mask, grid, lo, hi)
        if fit is not None:
            fits.append(fit)
    return fits


def finite_part_cumulative(values: np.ndarray, window: TrustWindow, grid: Grid) -> np.ndarray:
    """
    integral_0^x of a field that may be singular at the nodes of rho.

    Values outside the window are clamped first. Within NODE_BRIDGE_DX
    spacings of each fitted node the cells come from NodeFit.cell_integrals,
    so the result on either side of a node does not depend on the width of
    the excluded band. Without fitted nodes this is cumulative_values.
    """
    f = clamp_outside(np.asarray(values, dtype=float), window.mask)
    fits = node_fits(f, window, grid)
    if not fits:
        return cumulative_values(f, grid)

    cells = 0.5 * grid.dx * (f[:-1] + f[1:])
    for fit in fits:
        cells[fit.lo:fit.hi] = fit.cell_integrals(f, grid)
    G = np.concatenate(([0.0], np.cumsum(cells)))
    return G - np.interp(0.0, grid.x, G)


# ============================================================================
# Field Operations
# ============================================================================

def hydrodynamic_velocity(
    rho: RealField,
    drho_dt: RealField,
    window: TrustWindow,
    flux_anchor: str = "edges"
) -> RealField:
    """
    u = [integral of 2 rho d(rho)/dt] / rho^2 on the window, clamped outside.

    Args:
        rho: Amplitude at time t
        drho_dt: Its analytic time derivative
        window: Trust window for this instant
        flux_anchor: "edges" (no flux through the box edges) or "origin"
            (integral taken from x = 0)
    """
    require_same_grid(rho.grid, drho_dt.grid)
    if window.is_empty:
        raise EmptyWindowError()
    grid = rho.grid
    flux = _anchored_integral(2.0 * rho.values * drho_dt.values, grid, flux_anchor)
    u = np.zeros(grid.n_points)
    np.divide(flux, rho.values ** 2, out=u, where=window.mask)
    return RealField(grid, clamp_outside(u, window.mask))


def velocity_time_derivative(
    rho: RealField,
    drho_dt: RealField,
    d2rho_dt2: RealField,
    u: RealField,
    window: TrustWindow,
    flux_anchor: str = "edges"
) -> RealField:
    """du/dt from the analytic second time derivative of rho^2."""
    grid = rho.grid
    r, rt, rtt = rho.values, drho_dt.values, d2rho_dt2.values
    flux_dot = _anchored_integral(2.0 * (rt ** 2 + r * rtt), grid, flux_anchor)

    w = np.zeros(grid.n_points)
    np.divide(flux_dot, r ** 2, out=w, where=window.mask)
    correction = np.zeros(grid.n_points)
    np.divide(2.0 * u.values * rt, r, out=correction, where=window.mask)
    return RealField(grid, clamp_outside(w - correction, window.mask))


def assemble_potential(
    rho: RealField,
    u: RealField,
    du_dt: RealField,
    phi0_dot: float,
    window: TrustWindow,
    d2rho_dx2: Optional[np.ndarray] = None
) -> RealField:
    """
    V = integral_0^x du/dt + rho''/(2 rho) - u^2/2 - phi0_dot on the window.

    Args:
        rho: Amplitude
        u: Hydrodynamic velocity (clamped outside the window)
        du_dt: Its time derivative (clamped outside the window)
        phi0_dot: Origin phase rate at this instant
        window: Trust window
        d2rho_dx2: Analytic rho''; the 5-point stencil is used when None

    Returns:
        V with values outside the window clamped to the nearest window value
    """
    grid = rho.grid
    if window.is_empty:
        raise EmptyWindowError()
    if d2rho_dx2 is None:
        d2rho_dx2 = second_derivative_values(rho.values, grid.dx)

    quantum = np.zeros(grid.n_points)
    np.divide(d2rho_dx2, rho.values, out=quantum, where=window.mask)
    W = finite_part_cumulative(du_dt.values, window, grid)
    V = W + 0.5 * quantum - 0.5 * u.values ** 2 - phi0_dot

    inside = V[window.mask]
    if not np.all(np.isfinite(inside)):
        raise NumericError(
            "Non-finite potential inside the trust window; raise the density floor",
            details={"non_finite": int(np.count_nonzero(~np.isfinite(inside)))}
        )
    clamped = int(window.mask.size - np.count_nonzero(window.mask))
    return RealField(grid, clamp_outside(V, window.mask), {"clamped_outside_window": clamped})


def truncate(V: Union[RealField, np.ndarray], c: float) -> Union[RealField, np.ndarray]:
    """Clamp the potential to [-c, c]."""
    if not c > 0:
        raise ValidationError("Truncation level must be positive", details={"c": c})
    if isinstance(V, RealField):
        return RealField(V.grid, np.clip(V.values, -c, c))
    return np.clip(V, -c, c)


# ============================================================================
# Designed Protocol
# ============================================================================

@dataclass(frozen=True, eq=False)
class DesignedProtocol:
    """
    Time-sampled design: rho, u and V on n_t uniform instants in [0, t_f].

    Arrays are shaped (n_t, n_points). V_truncated and c are set by
    with_truncation().
    """

    grid: Grid
    times: np.ndarray
    rho: np.ndarray
    u: np.ndarray
    V: np.ndarray
    windows: np.ndarray
    N_of_t: np.ndarray
    S_overlap: float
    schedule: Schedule
    mode: str
    flux_anchor: str
    V_truncated: Optional[np.ndarray] = None
    c: Optional[float] = None
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    @property
    def n_t(self) -> int:
        return int(self.times.size)

    @property
    def t_f(self) -> float:
        return float(self.times[-1])

    def with_truncation(self, c: Optional[float]) -> "DesignedProtocol":
        """Copy with V_truncated = clip(V, -c, c); c=None drops truncation."""
        if c is None:
            return replace(self, V_truncated=None, c=None)
        V_trun = truncate(self.V, c)
        clamped = np.mean(np.abs(self.V) >= c, axis=1)
        diagnostics = dict(self.diagnostics)
        diagnostics["clamped_fraction"] = clamped
        return replace(self, V_truncated=V_trun, c=float(c), diagnostics=diagnostics)

    def potential_movie(self, truncated: bool = True) -> np.ndarray:
        if truncated and self.V_truncated is not None:
            return self.V_truncated
        return self.V

    def potential_at(self, t: float, truncated: bool = True) -> np.ndarray:
        """V(x, t) by linear interpolation between slices."""
        movie = self.potential_movie(truncated)
        if t < self.times[0] - 1e-12 * self.t_f or t > self.t_f * (1.0 + 1e-12):
            raise ValidationError(
                "Potential requested outside the designed interval",
                details={"t": t, "t_f": self.t_f}
            )
        pos = (t - self.times[0]) / (self.times[1] - self.times[0])
        k = int(np.clip(np.floor(pos), 0, self.n_t - 2))
        w = float(np.clip(pos - k, 0.0, 1.0))
        return (1.0 - w) * movie[k] + w * movie[k + 1]

    def slice_fields(self, k: int) -> Dict[str, RealField]:
        fields = {
            "rho": RealField(self.grid, self.rho[k]),
            "u": RealField(self.grid, self.u[k]),
            "V": RealField(self.grid, self.V[k]),
        }
        if self.V_truncated is not None:
            fields["V_trun"] = RealField(self.grid, self.V_truncated[k])
        return fields

    def phase(self, k: int) -> RealField:
        """Reconstructed phase phi0(t) - integral_0^x u (diagnostic)."""
        phi0, _ = self.schedule.phi0(float(self.times[k]))
        nodes = self.diagnostics.get("nodes")
        window = TrustWindow(
            threshold=0.0, mask=self.windows[k], nodes=tuple(nodes[k]) if nodes is not None else ()
        )
        return RealField(self.grid, phi0 - finite_part_cumulative(self.u[k], window, self.grid))

    def center_curvature(self) -> np.ndarray:
        """d2V/dx2 at the node nearest x = 0, per slice."""
        i0 = self.grid.origin_index
        if i0 is None:
            i0 = int(np.argmin(np.abs(self.grid.x)))
        dx2 = self.grid.dx ** 2
        V = self.V
        return (-V[:, i0 - 2] + 16 * V[:, i0 - 1] - 30 * V[:, i0] + 16 * V[:, i0 + 1] - V[:, i0 + 2]) / (12 * dx2)


# ============================================================================
# Designer
# ============================================================================

class ProtocolDesigner:
    """
    Holds the endpoint amplitudes and schedule and evaluates design slices.

    Args:
        initial: Initial stationary state
        final: Target state (eigenstate or lattice target)
        schedule: eta / phi0 schedule
        mode: "positive" (moduli, node-free states only) or "signed"
        flux_anchor: "edges" or "origin"
        density_floor: Trust window threshold on |rho|
        node_margin: Node exclusion margin in grid spacings
    """

    def __init__(
        self,
        initial: Eigenstate,
        final: Eigenstate,
        schedule: Schedule,
        mode: str = "positive",
        flux_anchor: str = "edges",
        density_floor: float = DENSITY_FLOOR,
        node_margin: float = NODE_MARGIN_DX
    ):
        if mode not in INTERPOLATION_MODES:
            raise ValidationError(f"Unknown interpolation mode: {mode}", details={"allowed": list(INTERPOLATION_MODES)})
        if flux_anchor not in FLUX_ANCHORS:
            raise ValidationError(f"Unknown flux anchor: {flux_anchor}", details={"allowed": list(FLUX_ANCHORS)})
        if density_floor <= 0 or node_margin < 0:
            raise ValidationError(
                "Trust window parameters must be positive",
                details={"density_floor": density_floor, "node_margin": node_margin}
            )
        require_same_grid(initial.grid, final.grid)
        if not initial.grid.contains_origin():
            raise ValidationError("Designer needs x = 0 inside the grid", details=initial.grid.to_dict())

        self.grid = initial.grid
        self.initial = initial
        self.final = final
        self.schedule = schedule
        self.mode = mode
        self.flux_anchor = flux_anchor
        self.density_floor = density_floor
        self.node_margin = node_margin

        self.a_i, self.c_i = self._amplitude(initial, "initial")
        self.a_f, self.c_f = self._amplitude(final, "final")

        dx = self.grid.dx
        self.n_i = float(trapezoid(self.a_i * self.a_i, dx=dx))
        self.n_f = float(trapezoid(self.a_f * self.a_f, dx=dx))
        self.S = float(trapezoid(self.a_i * self.a_f, dx=dx))
        self._check_collinearity()
        self.U_i = initial.trap.evaluate(self.grid)
        self.U_f = final.trap.evaluate(self.grid)

    def _amplitude(self, state: Eigenstate, which: str) -> Tuple[np.ndarray, np.ndarray]:
        psi = np.asarray(state.values, dtype=float)
        if self.mode == "signed":
            return psi, np.asarray(state.curvature, dtype=float)
        nodes = count_nodes(psi)
        if nodes:
            raise ValidationError(
                "Positive interpolation needs node-free endpoint states; use signed mode",
                details={"state": which, "nodes": nodes}
            )
        sign = np.sign(psi)
        return np.abs(psi), sign * np.asarray(state.curvature, dtype=float)

    def _check_collinearity(self) -> None:
        """Reject endpoints whose interpolation passes through zero."""
        gap = self.n_i + self.n_f - 2.0 * self.S
        if gap <= 0.0:
            return
        eta_star = (self.n_i - self.S) / gap
        if 0.0 < eta_star < 1.0:
            d_min = self.n_i - (self.n_i - self.S) ** 2 / gap
            if d_min <= COLLINEARITY_TOL * max(self.n_i, self.n_f):
                raise CollinearityError(details={"overlap": self.S, "eta": eta_star})

    # ==================== Interpolation ====================

    def interpolate(self, t: float) -> RhoSlice:
        """rho, its first two time derivatives and rho'' at time t."""
        eta, eta_d, eta_dd = self.schedule.eta(t)
        n_i, n_f, S = self.n_i, self.n_f, self.S

        D = (1.0 - eta) ** 2 * n_i + eta ** 2 * n_f + 2.0 * eta * (1.0 - eta) * S
        if D <= COLLINEARITY_TOL * max(n_i, n_f):
            raise CollinearityError(details={"t": t, "eta": eta, "denominator": D})

        gap = n_i + n_f - 2.0 * S
        D_eta = 2.0 * (eta * gap - (n_i - S))
        D_dot = D_eta * eta_d
        D_ddot = 2.0 * gap * eta_d ** 2 + D_eta * eta_dd

        N = D ** -0.5
        N_dot = -0.5 * D ** -1.5 * D_dot
        N_ddot = 0.75 * D ** -2.5 * D_dot ** 2 - 0.5 * D ** -1.5 * D_ddot

        diff = self.a_f - self.a_i
        b = (1.0 - eta) * self.a_i + eta * self.a_f
        b_dot = eta_d * diff
        b_ddot = eta_dd * diff

        return RhoSlice(
            t=t,
            eta=eta,
            N=N,
            rho=N * b,
            drho_dt=N_dot * b + N * b_dot,
            d2rho_dt2=N_ddot * b + 2.0 * N_dot * b_dot + N * b_ddot,
            d2rho_dx2=N * ((1.0 - eta) * self.c_i + eta * self.c_f),
        )

    def window(self, rho: np.ndarray) -> TrustWindow:
        return TrustWindow.from_rho(rho, self.grid, self.density_floor, self.node_margin)

    # ==================== Slice Evaluation ====================

    def velocity(self, s: RhoSlice, window: TrustWindow) -> Tuple[RealField, RealField]:
        """(u, du/dt) for one slice."""
        grid = self.grid
        rho = RealField(grid, s.rho)
        drho = RealField(grid, s.drho_dt)
        u = hydrodynamic_velocity(rho, drho, window, self.flux_anchor)
        du = velocity_time_derivative(rho, drho, RealField(grid, s.d2rho_dt2), u, window, self.flux_anchor)
        return u, du

    def continuity_residual(self, s: RhoSlice, u: np.ndarray, window: TrustWindow) -> float:
        """
        max |d(rho^2 u)/dx - d(rho^2)/dt| / max |d(rho^2)/dt| on the window.

        Midpoint differences keep it consistent with the trapezoid flux.
        """
        q = 2.0 * s.rho * s.drho_dt
        scale = float(np.max(np.abs(q[window.mask])))
        if scale == 0.0:
            return 0.0
        flux = s.rho ** 2 * u
        pairs = window.mask[:-1] & window.mask[1:]
        lhs = np.diff(flux) / self.grid.dx
        rhs = 0.5 * (q[:-1] + q[1:])
        if not np.any(pairs):
            return 0.0
        return float(np.max(np.abs(lhs - rhs)[pairs]) / scale)

    def evaluate_slice(self, k: int, t: float) -> Dict[str, Any]:
        """Design one instant; numeric failures carry the slice index."""
        try:
            s = self.interpolate(t)
            window = self.window(s.rho)
            if window.is_empty:
                raise EmptyWindowError(details={"t": t})
            u, du = self.velocity(s, window)
            _, phi0_dot = self.schedule.phi0(t)
            V = assemble_potential(
                RealField(self.grid, s.rho), u, du, phi0_dot, window, d2rho_dx2=s.d2rho_dx2
            )
        except AppError as exc:
            raise exc.with_slice(k)

        return {
            "rho": s.rho,
            "u": u.values,
            "V": V.values,
            "mask": window.mask,
            "N": s.N,
            "nodes": list(window.nodes),
            "window_fraction": window.fraction,
            "continuity_residual": self.continuity_residual(s, u.values, window),
        }

    def crosscheck_velocity_derivative(self, t: float, delta: Optional[float] = None) -> float:
        """
        Relative gap between analytic du/dt and a centered difference of u.

        Measured where the windows of t - delta, t and t + delta overlap;
        delta defaults to 1e-4 t_f.
        """
        tf = self.schedule.t_f
        delta = delta or 1e-4 * tf
        if t - delta < 0 or t + delta > tf:
            raise ValidationError("Cross-check instant too close to the ends", details={"t": t, "delta": delta})

        s = self.interpolate(t)
        window = self.window(s.rho)
        _, du = self.velocity(s, window)
        mask = window.mask.copy()

        def u_at(tt: float) -> np.ndarray:
            other = self.interpolate(tt)
            other_window = self.window(other.rho)
            mask[:] &= other_window.mask
            u, _ = self.velocity(other, other_window)
            return u.values

        fd = (u_at(t + delta) - u_at(t - delta)) / (2.0 * delta)
        scale = float(np.max(np.abs(du.values[mask])))
        if scale == 0.0:
            return float(np.max(np.abs(fd[mask])))
        return float(np.max(np.abs(fd[mask] - du.values[mask])) / scale)

    # ==================== Full Design ====================

    def design(self, n_t: int = DEFAULT_N_T, workers: int = 1) -> DesignedProtocol:
        """
        Evaluate n_t uniform slices over [0, t_f].

        Slices run on joblib threads; output order follows time.
        """
        if n_t < 2:
            raise ValidationError("n_t must be at least 2", details={"n_t": n_t})
        times = np.linspace(0.0, self.schedule.t_f, n_t)
        logger.info(
            f"Designing {n_t} slices ({self.mode} mode, flux anchor {self.flux_anchor}, "
            f"S={self.S:.6f}, workers={workers})"
        )

        if workers > 1:
            slices = Parallel(n_jobs=workers, prefer="threads")(
                delayed(contextvars.copy_context().run)(self.evaluate_slice, k, float(t))
                for k, t in enumerate(times)
            )
        else:
            slices = [self.evaluate_slice(k, float(t)) for k, t in enumerate(times)]

        rho = np.stack([s["rho"] for s in slices])
        u = np.stack([s["u"] for s in slices])
        V = np.stack([s["V"] for s in slices])
        windows = np.stack([s["mask"] for s in slices])

        diagnostics: Dict[str, Any] = {
            "continuity_residual": np.array([s["continuity_residual"] for s in slices]),
            "window_fraction": np.array([s["window_fraction"] for s in slices]),
            "nodes": [s["nodes"] for s in slices],
            "boundary_deviation": self._boundary_deviation(V, windows),
            "norm_error": float(np.max(np.abs(trapezoid(rho ** 2, dx=self.grid.dx, axis=1) - 1.0))),
        }
        logger.info(
            f"Design done: continuity residual max {diagnostics['continuity_residual'].max():.2e}, "
            f"boundary deviation {diagnostics['boundary_deviation']}"
        )

        return DesignedProtocol(
            grid=self.grid,
            times=times,
            rho=rho,
            u=u,
            V=V,
            windows=windows,
            N_of_t=np.array([s["N"] for s in slices]),
            S_overlap=self.S,
            schedule=self.schedule,
            mode=self.mode,
            flux_anchor=self.flux_anchor,
            diagnostics=diagnostics,
        )

    def _boundary_deviation(self, V: np.ndarray, windows: np.ndarray) -> Dict[str, float]:
        """Max window deviation of V from U - E - phi0_dot at both ends."""
        sched = self.schedule
        _, pd_start = sched.phi0(0.0)
        _, pd_end = sched.phi0(sched.t_f)
        target_start = self.U_i - self.initial.energy - pd_start
        target_end = self.U_f - self.final.energy - pd_end
        return {
            "initial": float(np.max(np.abs(V[0] - target_start)[windows[0]])),
            "final": float(np.max(np.abs(V[-1] - target_end)[windows[-1]])),
        }


# ============================================================================
# Functional Entry Points
# ============================================================================

def interpolate_rho(
    psi_i: Eigenstate,
    psi_f: Eigenstate,
    schedule: Schedule,
    mode: str,
    t: float
) -> Tuple[RealField, RealField, RealField]:
    """(rho, d rho/dt, d2 rho/dt2) at time t."""
    s = ProtocolDesigner(psi_i, psi_f, schedule, mode=mode).interpolate(t)
    grid = psi_i.grid
    return RealField(grid, s.rho), RealField(grid, s.drho_dt), RealField(grid, s.d2rho_dt2)


def design(
    initial: Eigenstate,
    final: Eigenstate,
    schedule: Schedule,
    mode: str = "positive",
    n_t: int = DEFAULT_N_T,
    truncation: Optional[float] = None,
    flux_anchor: str = "edges",
    density_floor: float = DENSITY_FLOOR,
    node_margin: float = NODE_MARGIN_DX,
    workers: int = 1
) -> DesignedProtocol:
    """Design a full protocol and apply optional truncation."""
    designer = ProtocolDesigner(
        initial, final, schedule, mode=mode, flux_anchor=flux_anchor,
        density_floor=density_floor, node_margin=node_margin
    )
    return designer.design(n_t=n_t, workers=workers).with_truncation(truncation)
