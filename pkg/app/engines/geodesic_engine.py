"""
Geodesic Engine for Wind Causality Studio

Geodesics of the conic Finsler metric F and the Lorentz-Finsler metric F_l
come from the Euler-Lagrange equations of L = F^2 (or F_l^2). All derivatives
of L are finite differences of the sheet roots, evaluated in one batched call
per right-hand side.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from scipy.integrate import solve_ivp, trapezoid

from app.engines.base_engine import BaseEngine
from app.errors import (
    DegenerateDirectionError,
    InapplicableError,
    InsufficientHorizonError,
    OutOfDomainError,
    StiffnessError,
)
from app.geometry.wind_field import Admissibility, WindStructure

MARGIN_STOP = 1e-6
DEDUPE_DEGREES = 2.0


class MetricTag(str, Enum):
    F = "F"
    F_L = "F_l"


class Termination(str, Enum):
    COMPLETED = "completed"
    LEFT_DOMAIN = "left_domain"
    HIT_EXCLUSION = "hit_exclusion"
    NEAR_LIGHTLIKE = "near_lightlike"


@dataclass
class GeodesicPath:
    """Sampled curve with its wind lengths"""

    times: np.ndarray
    points: np.ndarray
    velocities: np.ndarray
    metric_tag: MetricTag
    length_F: float
    length_Fl: float
    termination: Termination = Termination.COMPLETED
    energies: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def truncated(self) -> bool:
        return self.termination != Termination.COMPLETED

    @property
    def start(self) -> np.ndarray:
        return self.points[0]

    @property
    def end(self) -> np.ndarray:
        return self.points[-1]

    @property
    def duration(self) -> float:
        return float(self.times[-1] - self.times[0])

    @property
    def samples(self) -> List[Tuple[float, np.ndarray, np.ndarray]]:
        return [(float(t), x, v) for t, x, v in zip(self.times, self.points, self.velocities)]

    @property
    def length(self) -> float:
        return self.length_F if self.metric_tag == MetricTag.F else self.length_Fl

    @property
    def energy_drift(self) -> float:
        if self.energies is None or len(self.energies) == 0:
            return 0.0
        reference = abs(float(self.energies[0])) or 1.0
        return float(np.max(np.abs(self.energies - self.energies[0]))) / reference

    @classmethod
    def from_samples(
        cls,
        ws: WindStructure,
        times: np.ndarray,
        points: np.ndarray,
        velocities: Optional[np.ndarray] = None,
        metric_tag: MetricTag = MetricTag.F,
        termination: Termination = Termination.COMPLETED,
    ) -> "GeodesicPath":
        times = np.asarray(times, dtype=float)
        points = np.asarray(points, dtype=float)
        if velocities is None:
            velocities = np.gradient(points, times, axis=0, edge_order=2)
        lower, upper = ws.sheet_roots(points, velocities)
        tag = MetricTag(metric_tag)
        energy = (lower if tag == MetricTag.F else upper) ** 2
        return cls(
            times=times,
            points=points,
            velocities=np.asarray(velocities, dtype=float),
            metric_tag=tag,
            length_F=float(trapezoid(lower, times)),
            length_Fl=float(trapezoid(upper, times)),
            termination=termination,
            energies=energy,
        )

    @classmethod
    def straight(cls, ws: WindStructure, start, end, duration: float, samples: int = 201) -> "GeodesicPath":
        """Constant-velocity wind curve from start to end in parameter length duration"""
        start = np.asarray(start, dtype=float)
        end = np.asarray(end, dtype=float)
        times = np.linspace(0.0, duration, samples)
        velocity = (end - start) / duration
        points = start + times[:, None] * velocity
        return cls.from_samples(ws, times, points, np.tile(velocity, (samples, 1)))

    def to_frame(self):
        """Samples as a pandas DataFrame (t, x, y, vx, vy)"""
        import pandas as pd

        return pd.DataFrame(
            {
                "t": self.times,
                "x": self.points[:, 0],
                "y": self.points[:, 1],
                "vx": self.velocities[:, 0],
                "vy": self.velocities[:, 1],
            }
        )


class Lagrangian:
    """L = F^2 or F_l^2 with batched finite-difference derivatives"""

    def __init__(self, ws: WindStructure, tag: MetricTag = MetricTag.F):
        self.ws = ws
        self.tag = MetricTag(tag)

    def values(self, points: np.ndarray, velocities: np.ndarray) -> np.ndarray:
        lower, upper = self.ws.sheet_roots(points, velocities)
        return (lower if self.tag == MetricTag.F else upper) ** 2

    def derivatives(self, x: np.ndarray, v: np.ndarray):
        """
        Returns:
            (L, dL/dv, d2L/dv2, dL/dx, (d/dx dL/dv) v)
        """
        speed = max(float(np.linalg.norm(v)), 1e-12)
        hv = 1e-4 * speed
        hx = 1e-5 * max(1.0, float(np.linalg.norm(x)))
        eps = hx / speed
        e1, e2 = np.array([1.0, 0.0]), np.array([0.0, 1.0])

        vs = [v, v + hv * e1, v - hv * e1, v + hv * e2, v - hv * e2,
              v + hv * (e1 + e2), v + hv * (e1 - e2), v - hv * (e1 - e2), v - hv * (e1 + e2)]
        xs = [x] * len(vs)
        for dx_ in (hx * e1, -hx * e1, hx * e2, -hx * e2):
            xs.append(x + dx_)
            vs.append(v)
        for shift in (eps * v, -eps * v):
            for dv in (hv * e1, -hv * e1, hv * e2, -hv * e2):
                xs.append(x + shift)
                vs.append(v + dv)

        L = self.values(np.array(xs), np.array(vs))
        l0, l_p1, l_m1, l_p2, l_m2, l_pp, l_pm, l_mp, l_mm = L[:9]
        grad_v = np.array([(l_p1 - l_m1), (l_p2 - l_m2)]) / (2.0 * hv)
        hess = np.empty((2, 2))
        hess[0, 0] = (l_p1 - 2.0 * l0 + l_m1) / hv**2
        hess[1, 1] = (l_p2 - 2.0 * l0 + l_m2) / hv**2
        hess[0, 1] = hess[1, 0] = (l_pp - l_pm - l_mp + l_mm) / (4.0 * hv**2)
        grad_x = np.array([(L[9] - L[10]), (L[11] - L[12])]) / (2.0 * hx)
        ahead = np.array([(L[13] - L[14]), (L[15] - L[16])]) / (2.0 * hv)
        behind = np.array([(L[17] - L[18]), (L[19] - L[20])]) / (2.0 * hv)
        mixed = (ahead - behind) / (2.0 * eps)
        return l0, grad_v, hess, grad_x, mixed

    def acceleration(self, x: np.ndarray, v: np.ndarray) -> np.ndarray:
        _, _, hess, grad_x, mixed = self.derivatives(x, v)
        return np.linalg.solve(hess, grad_x - mixed)


def euler_lagrange_residual(ws: WindStructure, path: GeodesicPath, metric_tag: Optional[MetricTag] = None) -> float:
    """
    Relative Euler-Lagrange defect max |d/dt L_v - L_x| along interior samples

    Normalised by max |L_v| / duration + max |L_x| so straight lines of
    constant-coefficient metrics give values at finite-difference noise level.
    """
    lagrangian = Lagrangian(ws, metric_tag or path.metric_tag)
    grads_v = []
    grads_x = []
    for x, v in zip(path.points, path.velocities):
        _, grad_v, _, grad_x, _ = lagrangian.derivatives(x, v)
        grads_v.append(grad_v)
        grads_x.append(grad_x)
    grads_v = np.array(grads_v)
    grads_x = np.array(grads_x)
    if not np.all(np.isfinite(grads_v)) or not np.all(np.isfinite(grads_x)):
        return math.inf
    rate = np.gradient(grads_v, path.times, axis=0, edge_order=2)
    defect = np.linalg.norm(rate - grads_x, axis=1)[1:-1]
    scale = float(np.max(np.linalg.norm(grads_v, axis=1))) / max(path.duration, 1e-12)
    scale += float(np.max(np.linalg.norm(grads_x, axis=1))) + 1e-12
    return float(np.max(defect)) / scale if defect.size else 0.0


class GeodesicEngine(BaseEngine):
    """Engine for initial-value geodesics and two-point connections"""

    def __init__(self, shots: int = 64, max_workers: Optional[int] = None):
        """
        Initialize Geodesic Engine

        Args:
            shots: Initial directions in the shooting fan
            max_workers: Worker pool size for the fan
        """
        super().__init__(
            name="Geodesic",
            role="Geodesics of the wind metrics F and F_l",
            max_workers=max_workers,
        )
        self.shots = shots

    # -- initial value problem ---------------------------------------------

    def geodesic_ivp(
        self,
        ws: WindStructure,
        p,
        v,
        length: float,
        dt: Optional[float] = None,
        metric_tag: MetricTag = MetricTag.F,
        rtol: float = 1e-9,
    ) -> GeodesicPath:
        """
        Integrate the Euler-Lagrange system from (p, v) over parameter length

        Args:
            ws: Wind structure
            p: Start point
            v: Initial velocity, interior to the admissible cone
            length: Parameter length of the integration
            dt: Sampling step, defaults to length / 1000
            metric_tag: F (lower sheet) or F_l (upper sheet)

        Returns:
            GeodesicPath: samples with termination reason
        """
        p = np.asarray(p, dtype=float)
        v = np.asarray(v, dtype=float)
        tag = MetricTag(metric_tag)
        if not ws.domain.contains(p):
            raise OutOfDomainError(f"Start {p.tolist()} is outside the domain or excluded")
        status = ws.admissible(p, v) if np.any(v) else Admissibility.INADMISSIBLE
        if status == Admissibility.LIGHTLIKE_BOUNDARY:
            raise DegenerateDirectionError(f"Velocity {v.tolist()} lies on the lightlike boundary at {p.tolist()}")
        if status == Admissibility.INADMISSIBLE:
            raise DegenerateDirectionError(f"Velocity {v.tolist()} is not admissible at {p.tolist()}")
        if tag == MetricTag.F_L and not math.isfinite(ws.eval_Fl(p, v)):
            raise DegenerateDirectionError("F_l is only defined in strong wind")
        dt = dt or length / 1000.0
        return self._integrate(ws, p, v, length, dt, tag, rtol)

    def _integrate(self, ws, p, v, length, dt, tag, rtol) -> GeodesicPath:
        lagrangian = Lagrangian(ws, tag)
        domain = ws.domain
        check_margin = not ws.all_mild

        def rhs(_t, state):
            x, u = state[:2], state[2:]
            return np.concatenate([u, lagrangian.acceleration(x, u)])

        def leave_box(_t, state):
            return domain.distance_to_box(state[:2])

        def hit_exclusion(_t, state):
            return domain.distance_to_exclusions(state[:2]) if domain.exclusions else 1.0

        def near_lightlike(_t, state):
            if not check_margin:
                return 1.0
            return ws.admissibility_margin(state[:2], state[2:]) - MARGIN_STOP

        events = [leave_box, hit_exclusion, near_lightlike]
        for event in events:
            event.terminal = True
            event.direction = -1

        samples = max(2, int(math.ceil(length / dt)) + 1)
        t_eval = np.linspace(0.0, length, samples)
        with np.errstate(all="ignore"):
            solution = solve_ivp(
                rhs,
                (0.0, length),
                np.concatenate([p, v]),
                method="RK45",
                t_eval=t_eval,
                events=events,
                rtol=rtol,
                atol=rtol * 1e-2,
                max_step=max(dt * 10.0, length / 50.0),
            )
        if solution.status == -1 or not np.all(np.isfinite(solution.y)):
            raise StiffnessError(f"Geodesic integration failed: {solution.message}")

        termination = Termination.COMPLETED
        times, states = solution.t, solution.y.T
        if solution.status == 1:
            reasons = (Termination.LEFT_DOMAIN, Termination.HIT_EXCLUSION, Termination.NEAR_LIGHTLIKE)
            for index, reason in enumerate(reasons):
                hits = solution.t_events[index]
                if len(hits):
                    termination = reason
                    if not len(times) or times[-1] < hits[0]:
                        times = np.append(times, hits[0])
                        states = np.vstack([states, solution.y_events[index][0]])
                    break
            self.logger.info(f"Geodesic truncated at t={times[-1]:.4g}: {termination.value}")

        return GeodesicPath.from_samples(ws, times, states[:, :2], states[:, 2:], tag, termination)

    # -- two-point connections ---------------------------------------------

    def connect(self, ws: WindStructure, x, y, metric_tag: MetricTag = MetricTag.F) -> List[GeodesicPath]:
        """
        All distinct geodesics from x to y found by a shooting fan

        Shots start along ``self.shots`` directions with unit speed for the
        chosen sheet; each near miss is refined by Newton on (angle, length).

        Returns:
            List of GeodesicPath sorted by F-length, empty when no shot converges
        """
        return self.execute("connect", self._connect, ws, np.asarray(x, dtype=float), np.asarray(y, dtype=float), MetricTag(metric_tag))

    def _connect(self, ws: WindStructure, x: np.ndarray, y: np.ndarray, tag: MetricTag) -> List[GeodesicPath]:
        if not (ws.domain.contains(x) and ws.domain.contains(y)):
            raise OutOfDomainError("Both endpoints must lie in the domain")
        if np.allclose(x, y):
            raise ValueError("connect needs distinct endpoints")

        tolerance = 1e-5 * ws.domain.diameter
        angles = 2.0 * math.pi * np.arange(self.shots) / self.shots
        speeds = [self._unit_velocity(ws, x, a, tag) for a in angles]
        admissible = [(a, u) for a, u in zip(angles, speeds) if u is not None]
        if not admissible:
            return []
        slowest = min(float(np.linalg.norm(u)) for _, u in admissible)
        t_max = 3.0 * ws.domain.diameter / max(slowest, 1e-9)

        def shoot(item):
            angle, velocity = item
            try:
                path = self._integrate(ws, x, velocity, t_max, t_max / 400.0, tag, 1e-6)
            except StiffnessError:
                return None
            gaps = np.linalg.norm(path.points - y, axis=1)
            best = int(np.argmin(gaps))
            return angle, float(path.times[best]), float(gaps[best])

        shots = [s for s in self.map_parallel(shoot, admissible) if s is not None]
        spacing = 2.0 * math.pi / self.shots
        approach = max(3.0 * ws.domain.cell, 0.25 * float(np.linalg.norm(y - x)) * spacing * 4.0)
        candidates = sorted((s for s in shots if s[2] <= approach), key=lambda s: s[2])

        found: List[GeodesicPath] = []
        seen: List[float] = []
        for angle, duration, _ in candidates:
            refined = self._newton(ws, x, y, angle, duration, tag, tolerance, t_max)
            if refined is None:
                continue
            final_angle, path = refined
            if any(_angle_gap(final_angle, other) < math.radians(DEDUPE_DEGREES) for other in seen):
                continue
            seen.append(final_angle)
            found.append(path)

        found.sort(key=lambda path: path.length_F)
        self.logger.info(f"connect found {len(found)} geodesic(s) from {x.tolist()} to {y.tolist()}")
        return found

    @staticmethod
    def _unit_velocity(ws: WindStructure, x: np.ndarray, angle: float, tag: MetricTag) -> Optional[np.ndarray]:
        direction = np.array([math.cos(angle), math.sin(angle)])
        if ws.admissible(x, direction) != Admissibility.INTERIOR:
            return None
        value = ws.eval_F(x, direction) if tag == MetricTag.F else ws.eval_Fl(x, direction)
        if not math.isfinite(value) or value <= 0:
            return None
        return direction / value

    def _newton(self, ws, x, y, angle, duration, tag, tolerance, t_max, iterations: int = 25):
        delta = 1e-6
        for _ in range(iterations):
            if not (0.0 < duration <= t_max):
                return None
            base = self._endpoint(ws, x, angle, duration, tag)
            if base is None:
                return None
            end, velocity, path = base
            residual = end - y
            if np.linalg.norm(residual) <= tolerance:
                return angle, path
            nudged = self._endpoint(ws, x, angle + delta, duration, tag)
            if nudged is None:
                return None
            jacobian = np.column_stack([(nudged[0] - end) / delta, velocity])
            try:
                step = np.linalg.solve(jacobian, residual)
            except np.linalg.LinAlgError:
                return None
            scale = min(1.0, 0.25 / max(abs(step[0]), 1e-12))
            angle -= scale * step[0]
            duration -= scale * step[1]
        return None

    def _endpoint(self, ws, x, angle, duration, tag):
        velocity = self._unit_velocity(ws, x, angle, tag)
        if velocity is None or duration <= 0:
            return None
        try:
            path = self._integrate(ws, x, velocity, duration, duration / 200.0, tag, 1e-10)
        except StiffnessError:
            return None
        if path.truncated:
            return None
        return path.end, path.velocities[-1], path

    # -- extremizing test --------------------------------------------------

    def is_unit_extremizing(self, ws: WindStructure, path: GeodesicPath, reach) -> bool:
        """
        True iff the endpoint lies on the boundary of the c-ball of radius b - a,
        i.e. in the c-ball but outside the open ball, within one cell

        Raises:
            InapplicableError: the front is not centred at the path start
        """
        if np.linalg.norm(np.asarray(reach.center, dtype=float) - path.start) > reach.cell:
            raise InapplicableError(
                f"Front centred at {np.asarray(reach.center).tolist()} cannot test a path starting at {path.start.tolist()}"
            )
        duration = path.duration
        if reach.horizon + 0.5 * reach.dt < duration:
            raise InsufficientHorizonError(f"Reachability horizon {reach.horizon:g} shorter than path {duration:g}")
        distance = float(reach.distance_at(min(duration, reach.horizon), path.end)[0])
        return -reach.cell <= distance <= reach.cell


def _angle_gap(a: float, b: float) -> float:
    gap = abs(a - b) % (2.0 * math.pi)
    return min(gap, 2.0 * math.pi - gap)


_default_engine: Optional[GeodesicEngine] = None


def get_geodesic_engine() -> GeodesicEngine:
    global _default_engine
    if _default_engine is None:
        _default_engine = GeodesicEngine()
    return _default_engine


def geodesic_ivp(ws: WindStructure, p, v, length: float, dt: Optional[float] = None, metric_tag: MetricTag = MetricTag.F) -> GeodesicPath:
    return get_geodesic_engine().geodesic_ivp(ws, p, v, length, dt, metric_tag)


def connect(ws: WindStructure, x, y, metric_tag: MetricTag = MetricTag.F) -> List[GeodesicPath]:
    return get_geodesic_engine().connect(ws, x, y, metric_tag)


def is_unit_extremizing(ws: WindStructure, path: GeodesicPath, reach) -> bool:
    return get_geodesic_engine().is_unit_extremizing(ws, path, reach)
