"""
Reachability Engine for Wind Causality Studio

This engine computes exact-time reachable sets of wind curves:
- propagate: level-set family of c-balls and open balls from a centre
- separation: the F-separation d_F(x, y) from open-ball entry times
- hjb_arrival: fast-sweeping arrival times for all-mild scenarios
- sample_wind_curves: Monte-Carlo wind curves, an independent oracle
- crosscheck: agreement between the three methods
"""

import math
import threading
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from app.config import settings
from app.engines.base_engine import BaseEngine
from app.engines.levelset import (
    lax_friedrichs_rhs,
    sample_field,
    signed_distance,
    tvd_rk3_step,
)
from app.errors import (
    ConfigurationError,
    InapplicableError,
    InsufficientHorizonError,
    OutOfDomainError,
)
from app.geometry.norm_kernel import eval_norm_batch
from app.geometry.wind_field import WindStructure

MIN_SAMPLER_COUNT = 100
LIGHTLIKE_BAND = 1e-2
ANALYTIC_CELLS = 2.0


class Direction(str, Enum):
    FORWARD = "forward"
    BACKWARD = "backward"

    @property
    def sign(self) -> float:
        return 1.0 if self == Direction.FORWARD else -1.0


@dataclass
class SeparationResult:
    """d_F value; +inf comes with the horizon as a certified lower bound"""

    value: float
    horizon: float
    front_advancing: bool

    @property
    def lower_bound(self) -> Optional[float]:
        return self.horizon if math.isinf(self.value) else None

    def __float__(self) -> float:
        return self.value

    def to_dict(self) -> dict:
        return {
            "value": None if math.isinf(self.value) else self.value,
            "infinite": math.isinf(self.value),
            "lower_bound": self.lower_bound,
            "front_advancing": self.front_advancing,
        }


@dataclass
class ReachabilityFamily:
    """
    Exact-time reachable sets from a centre, indexed by step k (time k * dt)

    ``snapshots`` holds float32 level-set grids for stored steps; missing
    steps are recomputed from the nearest earlier snapshot on demand.
    """

    ws: WindStructure
    center: np.ndarray
    direction: Direction
    dt: float
    steps: int
    analytic_steps: int
    snapshots: Dict[int, np.ndarray]
    earliest_arrival: np.ndarray
    watch_points: np.ndarray
    watch_distance: np.ndarray
    front_advancing: bool
    _advance: Callable[[np.ndarray, int, int], np.ndarray] = field(repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)
    _recent: Dict[int, np.ndarray] = field(default_factory=dict, repr=False)

    @property
    def horizon(self) -> float:
        return self.steps * self.dt

    @property
    def cell(self) -> float:
        return self.ws.domain.cell

    @property
    def center_index(self) -> Tuple[int, int]:
        return self.ws.domain.index_of(self.center)

    def step_for(self, r: float) -> int:
        if r < 0:
            raise ValueError("Parameter length must be non-negative")
        k = int(round(r / self.dt))
        if k > self.steps:
            raise InsufficientHorizonError(f"Requested r={r:g} beyond horizon {self.horizon:g}")
        return k

    def level(self, r: float) -> np.ndarray:
        """Level-set grid at the step nearest to r"""
        return self.level_at_step(self.step_for(r))

    def level_at_step(self, k: int) -> np.ndarray:
        if k in self.snapshots:
            return self.snapshots[k].astype(float)
        with self._lock:
            if k in self._recent:
                return self._recent[k]
            start = max(j for j in self.snapshots if j <= k)
            phi = self._advance(self.snapshots[start].astype(float), start, k)
            if len(self._recent) > 8:
                self._recent.clear()
            self._recent[k] = phi
            return phi

    def distance(self, r: float) -> np.ndarray:
        """Signed distance estimate to the c-ball boundary (negative inside)"""
        return self.distance_at_step(self.step_for(r))

    def distance_at_step(self, k: int) -> np.ndarray:
        domain = self.ws.domain
        return signed_distance(self.level_at_step(k), domain.dx, domain.dy)

    def c_ball(self, r: float) -> np.ndarray:
        """Closed ball mask; {centre cell} at r = 0"""
        k = self.step_for(r)
        if k == 0:
            mask = np.zeros((self.ws.domain.ny, self.ws.domain.nx), dtype=bool)
            mask[self.center_index] = True
            return mask
        return (self.distance_at_step(k) <= 0) & ~self.ws.domain.excluded_mask

    def open_ball(self, r: float) -> np.ndarray:
        """Open ball mask: cells at least one cell inside the c-ball boundary"""
        k = self.step_for(r)
        if k == 0:
            return np.zeros((self.ws.domain.ny, self.ws.domain.nx), dtype=bool)
        return (self.distance_at_step(k) < -self.cell) & ~self.ws.domain.excluded_mask

    def boundary_band(self, r: float) -> np.ndarray:
        """Cells within one cell of the c-ball boundary"""
        return np.abs(self.distance(r)) <= self.cell

    def distance_at(self, r: float, points) -> np.ndarray:
        domain = self.ws.domain
        return sample_field(domain.xs, domain.ys, self.distance(r), points)

    def contains_closed(self, r: float, point, tolerance_cells: float = 0.0) -> bool:
        if self.step_for(r) == 0:
            return bool(np.linalg.norm(np.asarray(point, dtype=float) - self.center) <= tolerance_cells * self.cell)
        return bool(self.distance_at(r, point)[0] <= tolerance_cells * self.cell)

    def lightlike_cells(self, r: float) -> np.ndarray:
        """
        Boundary cells whose front velocity sits within 1e-2 relative root gap
        of the velocity-cone boundary, where open and closed balls cannot be
        told apart at grid resolution
        """
        k = self.step_for(r)
        band = self.boundary_band(r) & (self.ws.region_grid.codes == 2)
        if not np.any(band):
            return band
        domain = self.ws.domain
        phi = self.level_at_step(k)
        gy, gx = np.gradient(phi, domain.dy, domain.dx)
        norm = np.maximum(np.hypot(gx, gy), 1e-12)
        nx_, ny_ = gx[band] / norm[band], gy[band] / norm[band]
        if self.direction == Direction.BACKWARD:
            nx_, ny_ = -nx_, -ny_
        vx, vy = self.ws.grid_support.optimal_velocity(nx_, ny_, index=band)
        points = self.ws.grid_points.reshape(domain.ny, domain.nx, 2)[band]
        lower, upper = self.ws.sheet_roots(points, np.column_stack([vx, vy]))
        with np.errstate(invalid="ignore"):
            gap = np.where(np.isfinite(upper), (upper - lower) / (upper + lower), 1.0)
        flags = np.zeros_like(band)
        flags[band] = gap < LIGHTLIKE_BAND
        return flags

    def first_entry(self, watch_index: int = 0) -> SeparationResult:
        """
        Open-ball entry time of a watched point

        The first step where the point is a full cell inside the front
        certifies membership of the open ball; the reported value is the zero
        crossing of the front distance preceding that step.
        """
        series = self.watch_distance[:, watch_index]
        inside = np.nonzero(series[1:] < -self.cell)[0]
        if inside.size == 0:
            return SeparationResult(math.inf, self.horizon, self.front_advancing)
        k = int(inside[0]) + 1
        outside = np.nonzero(series[:k] >= 0)[0]
        if outside.size == 0:
            return SeparationResult(0.0, self.horizon, self.front_advancing)
        j = int(outside[-1])
        a, b = series[j], series[j + 1]
        fraction = a / (a - b) if a != b else 0.0
        return SeparationResult((j + fraction) * self.dt, self.horizon, self.front_advancing)

    def trace_characteristic(self, point, r: float) -> np.ndarray:
        """
        Follow the front characteristic from a boundary point back to the centre

        Each step moves against the body velocity that maximises the outward
        normal of the front; inside the analytic start the path is the straight
        segment to the centre.

        Returns:
            (k + 1, 2) array of positions at times 0, dt, ..., k dt
        """
        k = self.step_for(r)
        domain = self.ws.domain
        x = np.asarray(point, dtype=float).copy()
        path = [x.copy()]
        for step in range(k, self.analytic_steps, -1):
            phi = self.level_at_step(step)
            gy, gx = np.gradient(phi, domain.dy, domain.dx)
            grad = np.array([sample_field(domain.xs, domain.ys, gx, x)[0], sample_field(domain.xs, domain.ys, gy, x)[0]])
            normal = grad / max(float(np.linalg.norm(grad)), 1e-12)
            velocity = optimal_velocity_at(self.ws, x, self.direction.sign * normal) * self.direction.sign
            x = x - self.dt * velocity
            path.append(x.copy())
        remaining = min(k, self.analytic_steps)
        start = path[-1]
        for j in range(remaining - 1, -1, -1):
            path.append(self.center + (start - self.center) * (j / remaining))
        return np.array(path[::-1])


def optimal_velocity_at(ws: WindStructure, p: np.ndarray, normal: np.ndarray, step: float = 1e-6) -> np.ndarray:
    """Point of the velocity body B_p maximising <normal, v>"""
    basis = np.array([[step, 0.0], [-step, 0.0], [0.0, step], [0.0, -step]])
    points = np.broadcast_to(p, (4, 2))
    values = ws.velocity_body_support_rows(points, normal[None, :] + basis)
    return np.array([values[0] - values[1], values[2] - values[3]]) / (2.0 * step)


@dataclass
class SampleResult:
    """Endpoints of Monte-Carlo wind curves plus the discard tally"""

    endpoints: np.ndarray
    requested: int
    discarded: int
    paths: Optional[np.ndarray] = None
    times: Optional[np.ndarray] = None

    def to_dict(self) -> dict:
        return {"requested": self.requested, "kept": int(len(self.endpoints)), "discarded": self.discarded}


def hull_area(points: np.ndarray) -> float:
    """Area of the convex hull (0 for degenerate point sets)"""
    if len(points) < 3:
        return 0.0
    try:
        return float(ConvexHull(points).volume)
    except QhullError:
        return 0.0


class ReachabilityEngine(BaseEngine):
    """Engine for wind balls, c-balls, F-separation and arrival times"""

    def __init__(self, snapshot_budget_mb: Optional[float] = None, max_workers: Optional[int] = None):
        """
        Initialize Reachability Engine

        Args:
            snapshot_budget_mb: Memory allowed for stored level-set snapshots
            max_workers: Worker pool size
        """
        super().__init__(
            name="Reachability",
            role="Exact-time reachable sets of wind curves",
            max_workers=max_workers,
        )
        self.snapshot_budget_mb = snapshot_budget_mb or settings.snapshot_budget_mb

    # -- front propagation -------------------------------------------------

    def default_dt(self, ws: WindStructure) -> float:
        """Half the CFL bound: half a cell per step at the fastest body speed"""
        return 0.5 * self.cfl_limit(ws)

    @staticmethod
    def cfl_limit(ws: WindStructure) -> float:
        return min(ws.domain.dx, ws.domain.dy) / max(ws.max_speed, 1e-12)

    def propagate(
        self,
        ws: WindStructure,
        x0,
        horizon: float,
        dt: Optional[float] = None,
        direction: Direction = Direction.FORWARD,
        watch: Sequence = (),
        checkpoints: Sequence[float] = (),
    ) -> ReachabilityFamily:
        """
        Propagate exact-time reachable sets from x0 up to parameter length horizon

        Args:
            ws: Wind structure
            x0: Centre point
            horizon: Largest parameter length r
            dt: Step, at most one cell per fastest body speed
            direction: forward (reached from x0) or backward (reaching x0)
            watch: Points whose front distance is recorded at every step
            checkpoints: Parameter lengths whose snapshots are always stored

        Returns:
            ReachabilityFamily: stored level sets, arrivals and watch series
        """
        return self.execute("propagate", self._propagate, ws, x0, horizon, dt, Direction(direction), watch, checkpoints)

    def _propagate(self, ws, x0, horizon, dt, direction, watch, checkpoints) -> ReachabilityFamily:
        x0 = np.asarray(x0, dtype=float)
        if not ws.domain.contains(x0):
            raise OutOfDomainError(f"Centre {x0.tolist()} is outside the domain or excluded")
        if horizon <= 0:
            raise ConfigurationError("Horizon must be positive")
        limit = self.cfl_limit(ws)
        if dt is None:
            dt = 0.5 * limit
        elif dt <= 0 or dt > limit * (1.0 + 1e-12):
            raise ConfigurationError(f"dt={dt:g} violates the CFL bound {limit:g} (cell / max speed)")
        steps = max(1, int(math.ceil(horizon / dt - 1e-9)))
        dt = horizon / steps

        domain = ws.domain
        shape = (domain.ny, domain.nx)
        sign = direction.sign
        offsets = sign * (ws.grid_points - x0)
        base = ws.norm_at(x0)
        wind0 = ws.wind_at(x0)
        obstacle = domain.obstacle_distance

        theta = 2.0 * math.pi * np.arange(64) / 64
        widest = float(np.max(eval_norm_batch(base, np.column_stack([np.cos(theta), np.sin(theta)]))))
        analytic_steps = min(steps, int(math.ceil(ANALYTIC_CELLS * domain.cell * widest / dt)))

        def constrain(phi: np.ndarray) -> np.ndarray:
            return np.maximum(phi, -obstacle)

        def analytic(k: int) -> np.ndarray:
            t = k * dt
            values = eval_norm_batch(base, offsets - t * wind0) - t
            return constrain(values.reshape(shape))

        support = ws.grid_support
        alpha_x, alpha_y = ws.speed_bounds
        if direction == Direction.FORWARD:
            hamiltonian = support
        else:
            def hamiltonian(qx, qy):
                return support(-qx, -qy)

        def rhs(phi: np.ndarray) -> np.ndarray:
            return lax_friedrichs_rhs(phi, hamiltonian, alpha_x, alpha_y, domain.dx, domain.dy)

        def advance(phi: np.ndarray, k_from: int, k_to: int) -> np.ndarray:
            if k_to <= analytic_steps:
                return analytic(k_to)
            if k_from < analytic_steps:
                phi, k_from = analytic(analytic_steps), analytic_steps
            for _ in range(k_from, k_to):
                phi = tvd_rk3_step(phi, dt, rhs, constrain)
            return phi

        bytes_per = domain.nx * domain.ny * 4
        budget = self.snapshot_budget_mb * 1024 * 1024
        stride = max(1, int(math.ceil((steps + 1) * bytes_per / budget)))
        keep = {0, analytic_steps, steps}
        keep.update(min(steps, int(round(r / dt))) for r in checkpoints if r >= 0)
        if stride > 1:
            self.logger.warning(f"Snapshot budget exceeded; storing every {stride} steps")

        watch_points = np.asarray(list(watch), dtype=float).reshape(-1, 2)
        watch_distance = np.zeros((steps + 1, len(watch_points)))
        arrival = np.full(shape, math.inf)
        center_cell = domain.index_of(x0)
        arrival[center_cell] = 0.0
        snapshots: Dict[int, np.ndarray] = {}

        phi = analytic(0)
        previous = signed_distance(phi, domain.dx, domain.dy)
        changed_last = False
        for k in range(steps + 1):
            if k > 0:
                phi = analytic(k) if k <= analytic_steps else tvd_rk3_step(phi, dt, rhs, constrain)
            if k % stride == 0 or k in keep:
                snapshots[k] = phi.astype(np.float32)
            current = signed_distance(phi, domain.dx, domain.dy)
            if len(watch_points):
                watch_distance[k] = sample_field(domain.xs, domain.ys, current, watch_points)
            if k > 0:
                entered = (current <= 0) & np.isinf(arrival)
                with np.errstate(divide="ignore", invalid="ignore"):
                    fraction = np.where(previous > 0, previous / (previous - current), 1.0)
                arrival[entered] = ((k - 1) + np.clip(fraction[entered], 0.0, 1.0)) * dt
                changed_last = bool(np.any((current <= 0) != (previous <= 0)))
            previous = current

        arrival[domain.excluded_mask] = math.inf
        self.logger.info(
            f"Propagated {direction.value} from {x0.tolist()} for {steps} steps (dt={dt:.4g}, stored {len(snapshots)})"
        )
        return ReachabilityFamily(
            ws=ws,
            center=x0,
            direction=direction,
            dt=dt,
            steps=steps,
            analytic_steps=analytic_steps,
            snapshots=snapshots,
            earliest_arrival=arrival,
            watch_points=watch_points,
            watch_distance=watch_distance,
            front_advancing=changed_last,
            _advance=advance,
        )

    # -- separation --------------------------------------------------------

    def separation(
        self,
        ws: WindStructure,
        x,
        y,
        horizon: float,
        resolution: Optional[Tuple[int, int]] = None,
        dt: Optional[float] = None,
    ) -> SeparationResult:
        """
        F-separation d_F(x, y): earliest r with y in the open ball B+(x, r)

        Args:
            ws: Wind structure
            x: Start point
            y: End point
            horizon: Largest r explored
            resolution: Optional (nx, ny) regrid

        Returns:
            SeparationResult: value or +inf with the horizon as lower bound
        """
        if resolution is not None:
            ws = regrid(ws, resolution)
        if not ws.domain.contains(y):
            raise OutOfDomainError(f"Point {list(y)} is outside the domain or excluded")
        family = self.propagate(ws, x, horizon, dt=dt, watch=[y])
        return family.first_entry(0)

    # -- stationary cross-check --------------------------------------------

    def hjb_arrival(self, ws: WindStructure, x0, tolerance: float = 1e-8, max_sweeps: int = 2000) -> np.ndarray:
        """
        Arrival times solving S(x, grad T) = 1 by Lax-Friedrichs fast sweeping

        Requires waiting to be allowed everywhere, i.e. an all-mild scenario.
        Excluded regions are modelled as cells where the body shrinks a
        thousandfold.
        """
        return self.execute("hjb_arrival", self._hjb_arrival, ws, np.asarray(x0, dtype=float), tolerance, max_sweeps)

    def _hjb_arrival(self, ws: WindStructure, x0: np.ndarray, tolerance: float, max_sweeps: int) -> np.ndarray:
        if not ws.all_mild:
            raise InapplicableError("hjb_arrival needs 0 inside every velocity body (all-mild scenario)")
        if not ws.domain.contains(x0):
            raise OutOfDomainError(f"Source {x0.tolist()} is outside the domain or excluded")

        domain = ws.domain
        ny, nx = domain.ny, domain.nx
        dx, dy = domain.dx, domain.dy
        support = ws.grid_support
        slowness = np.where(domain.excluded_mask, 1e-3, 1.0)
        alpha_x, alpha_y = ws.speed_bounds
        alpha_x = alpha_x * slowness
        alpha_y = alpha_y * slowness

        big = 1e6
        T = np.full((ny, nx), big)
        offsets = ws.grid_points - x0
        radius = 2.5 * domain.cell
        near = (np.hypot(offsets[:, 0], offsets[:, 1]) <= radius).reshape(ny, nx)
        near[domain.index_of(x0)] = True
        lower, _ = ws.sheet_roots(np.broadcast_to(x0, (int(near.sum()), 2)), offsets[near.ravel()])
        T[near] = lower
        fixed = near.copy()

        def update(index) -> float:
            rows, cols = index
            east, west = T[rows, cols + 1], T[rows, cols - 1]
            north, south = T[rows + 1, cols], T[rows - 1, cols]
            px = (east - west) / (2.0 * dx)
            py = (north - south) / (2.0 * dy)
            ax, ay = alpha_x[rows, cols], alpha_y[rows, cols]
            value = slowness[rows, cols] * support(px, py, (rows, cols))
            candidate = (1.0 - value + ax * (east + west) / (2.0 * dx) + ay * (north + south) / (2.0 * dy)) / (
                ax / dx + ay / dy
            )
            old = T[rows, cols]
            new = np.where(fixed[rows, cols], old, np.minimum(old, candidate))
            T[rows, cols] = new
            return float(np.max(np.abs(old - new))) if new.size else 0.0

        interior_rows = np.arange(1, ny - 1)
        interior_cols = np.arange(1, nx - 1)
        for sweep in range(max_sweeps):
            change = 0.0
            for cols in (interior_cols, interior_cols[::-1]):
                for c in cols:
                    change = max(change, update((interior_rows, np.full(ny - 2, c))))
            for rows in (interior_rows, interior_rows[::-1]):
                for r in rows:
                    change = max(change, update((np.full(nx - 2, r), interior_cols)))
            _extrapolate_rim(T)
            if change < tolerance:
                self.logger.info(f"Fast sweeping converged after {sweep + 1} sweeps")
                break
        else:
            self.logger.warning(f"Fast sweeping stopped after {max_sweeps} sweeps (last change {change:.2e})")

        T = np.where(T >= 0.5 * big, math.inf, T)
        T[domain.excluded_mask] = math.inf
        return T

    # -- Monte-Carlo oracle ------------------------------------------------

    def sample_wind_curves(
        self,
        ws: WindStructure,
        x0,
        r: float,
        count: int,
        seed: Optional[int] = None,
        pieces: int = 8,
        substeps: int = 8,
        direction: Direction = Direction.FORWARD,
        keep_paths: bool = False,
    ) -> SampleResult:
        """
        Random wind curves of parameter length r from x0

        Half the curves keep one body-relative control throughout, the rest
        redraw it on each of ``pieces`` equal sub-intervals; controls are
        uniform over the unit ball of F0 so velocities fill the body.
        Curves leaving the box or touching an excluded region are discarded.
        """
        if count < MIN_SAMPLER_COUNT:
            raise ConfigurationError(f"sample_wind_curves needs count >= {MIN_SAMPLER_COUNT}, got {count}")
        rng = np.random.default_rng(settings.default_seed if seed is None else seed)
        direction = Direction(direction)
        x0 = np.asarray(x0, dtype=float)
        positions = np.tile(x0, (count, 1))
        alive = np.ones(count, dtype=bool)
        constant = np.arange(count) < count // 2
        controls = _draw_unit_ball(ws, rng, count)
        h = r / (pieces * substeps)
        paths = [positions.copy()] if keep_paths else None

        for piece in range(pieces):
            if piece > 0:
                redraw = _draw_unit_ball(ws, rng, count)
                controls = np.where(constant[:, None], controls, redraw)
            for _ in range(substeps):
                mid = positions + 0.5 * h * _velocities(ws, positions, controls, direction)
                positions = positions + h * _velocities(ws, mid, controls, direction)
                alive &= _inside(ws, positions)
                if keep_paths:
                    paths.append(positions.copy())

        discarded = int(np.sum(~alive))
        if discarded:
            self.logger.info(f"Sampler discarded {discarded} of {count} curves leaving the domain")
        stacked = np.stack(paths, axis=1)[alive] if keep_paths else None
        times = np.linspace(0.0, r, pieces * substeps + 1) if keep_paths else None
        return SampleResult(positions[alive], count, discarded, stacked, times)

    # -- agreement report --------------------------------------------------

    def crosscheck(self, ws: WindStructure, x0, r: float, count: int = 2000, seed: Optional[int] = None) -> dict:
        """
        Agreement between front propagation, fast sweeping and sampling

        Returns:
            Dict with containment, coverage and (all-mild only) arrival errors
        """
        x0 = np.asarray(x0, dtype=float)
        family = self.propagate(ws, x0, r)
        domain = ws.domain
        cell = domain.cell
        samples = self.sample_wind_curves(ws, x0, r, count, seed=seed)
        distance = family.distance_at(r, samples.endpoints) if len(samples.endpoints) else np.array([])
        outside = int(np.sum(distance > cell))
        ball_area = float(np.sum(family.c_ball(r))) * domain.dx * domain.dy
        report = {
            "center": x0.tolist(),
            "r": r,
            "sampler": samples.to_dict(),
            "sampler_outside_dilated_c_ball": outside,
            "hull_coverage": hull_area(samples.endpoints) / ball_area if ball_area > 0 else None,
        }
        if ws.all_mild:
            hjb = self.hjb_arrival(ws, x0)
            front = family.earliest_arrival
            mask = np.isfinite(front) & np.isfinite(hjb) & (front <= r)
            error = float(np.max(np.abs(front[mask] - hjb[mask]))) if np.any(mask) else 0.0
            cells = error * _min_speed(ws) / cell
            report["hjb_max_error"] = error
            report["hjb_error_cells"] = cells
            report["hjb_within_three_cells"] = bool(cells <= 3.0)
        else:
            report["hjb_max_error"] = None
            report["hjb_skipped"] = "scenario has critical or strong cells"
        report["status"] = "agree" if outside == 0 and report.get("hjb_within_three_cells", True) else "disagree"
        return report


def _min_speed(ws: WindStructure) -> float:
    """Smallest outward body speed over the grid, the slowest front travel"""
    pts = ws.grid_points
    theta = 2.0 * math.pi * np.arange(16) / 16
    slowest = math.inf
    for t in theta:
        q = np.broadcast_to(np.array([math.cos(t), math.sin(t)]), (len(pts), 2))
        slowest = min(slowest, float(np.min(ws.velocity_body_support_rows(pts, q))))
    return max(slowest, 1e-3)


def _extrapolate_rim(T: np.ndarray) -> None:
    T[0, :] = np.minimum(np.maximum(2.0 * T[1, :] - T[2, :], T[2, :]), T[0, :])
    T[-1, :] = np.minimum(np.maximum(2.0 * T[-2, :] - T[-3, :], T[-3, :]), T[-1, :])
    T[:, 0] = np.minimum(np.maximum(2.0 * T[:, 1] - T[:, 2], T[:, 2]), T[:, 0])
    T[:, -1] = np.minimum(np.maximum(2.0 * T[:, -2] - T[:, -3], T[:, -3]), T[:, -1])


def _draw_unit_ball(ws: WindStructure, rng: np.random.Generator, count: int) -> np.ndarray:
    """Uniform points of the unit disk (ellipse bases) or of the constant unit ball"""
    if ws.norm_field.ellipse_rows(ws.grid_points[:1]) is not None:
        radius = np.sqrt(rng.random(count))
        angle = 2.0 * math.pi * rng.random(count)
        return np.column_stack([radius * np.cos(angle), radius * np.sin(angle)])
    norm = ws.norm_field.norm_at(ws.grid_points[0])
    theta = 2.0 * math.pi * np.arange(256) / 256
    reach = 1.0 / float(np.min(eval_norm_batch(norm, np.column_stack([np.cos(theta), np.sin(theta)])))) * 1.05
    drawn = np.empty((0, 2))
    while len(drawn) < count:
        radius = reach * np.sqrt(rng.random(2 * count))
        angle = 2.0 * math.pi * rng.random(2 * count)
        candidates = np.column_stack([radius * np.cos(angle), radius * np.sin(angle)])
        drawn = np.vstack([drawn, candidates[eval_norm_batch(norm, candidates) <= 1.0]])
    return drawn[:count]


def _velocities(ws: WindStructure, points: np.ndarray, controls: np.ndarray, direction: Direction) -> np.ndarray:
    """W(x) plus the control mapped into the unit ball of F0 at x"""
    ellipse = ws.norm_field.ellipse_rows(points)
    if ellipse is None:
        offsets = controls
    else:
        centre, q = ellipse
        factor = np.linalg.cholesky(np.linalg.inv(q))
        offsets = centre + np.einsum("nij,nj->ni", factor, controls)
    return direction.sign * (ws.wind_rows(points) + offsets)


def _inside(ws: WindStructure, points: np.ndarray) -> np.ndarray:
    domain = ws.domain
    x0, x1, y0, y1 = domain.box
    ok = (points[:, 0] >= x0) & (points[:, 0] <= x1) & (points[:, 1] >= y0) & (points[:, 1] <= y1)
    for region in domain.exclusions:
        ok &= region.signed_distance(points[:, 0], points[:, 1]) > 0
    return ok


def regrid(ws: WindStructure, resolution: Tuple[int, int]) -> WindStructure:
    """Same scenario on another grid"""
    return WindStructure(
        ws.domain.with_resolution(int(resolution[0]), int(resolution[1])),
        ws.norm_field,
        ws.wind,
        ws.critical_tolerance,
    )


_default_engine: Optional[ReachabilityEngine] = None


def get_reachability_engine() -> ReachabilityEngine:
    global _default_engine
    if _default_engine is None:
        _default_engine = ReachabilityEngine()
    return _default_engine


def propagate(ws: WindStructure, x0, horizon: float, dt: Optional[float] = None, **kwargs) -> ReachabilityFamily:
    return get_reachability_engine().propagate(ws, x0, horizon, dt, **kwargs)


def separation(ws: WindStructure, x, y, horizon: float, resolution: Optional[Tuple[int, int]] = None) -> float:
    return float(get_reachability_engine().separation(ws, x, y, horizon, resolution))


def hjb_arrival(ws: WindStructure, x0) -> np.ndarray:
    return get_reachability_engine().hjb_arrival(ws, x0)


def sample_wind_curves(ws: WindStructure, x0, r: float, count: int, seed: Optional[int] = None) -> List[np.ndarray]:
    return list(get_reachability_engine().sample_wind_curves(ws, x0, r, count, seed=seed).endpoints)


def distance_to_front(family: ReachabilityFamily, r: float, points) -> np.ndarray:
    return family.distance_at(r, points)
