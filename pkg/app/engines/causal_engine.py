"""
Causal Engine for Wind Causality Studio

Causality of the spacetime R x S built from a wind structure on S, with time
t and K = d/dt a cone Killing field. Causal curves are parametrized by t, so
every query reduces to base reachability:
- cone_membership and eval_G at a spacetime event
- chronological_query / causal_query through wind balls and c-balls
- future_slice masks of I+ and J+
- horismos_check: boundary curves recovered from the front history
- time_function_check and strong_causality_check on sampled causal curves
"""

import math
import threading
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import Polynomial

from app.engines.base_engine import BaseEngine
from app.engines.geodesic_engine import GeodesicPath, MetricTag, euler_lagrange_residual
from app.engines.reachability_engine import (
    MIN_SAMPLER_COUNT,
    Direction,
    ReachabilityEngine,
    ReachabilityFamily,
    get_reachability_engine,
)
from app.errors import (
    ConfigurationError,
    InapplicableError,
    InsufficientHorizonError,
    OutOfDomainError,
)
from app.geometry.wind_field import WindStructure

LIGHTLIKE_TOLERANCE = 1e-9
LENGTH_TOLERANCE = 0.03
RESIDUAL_TOLERANCE = 1e-3


class ConeClass(str, Enum):
    FUTURE_TIMELIKE = "future_timelike"
    FUTURE_LIGHTLIKE = "future_lightlike"
    PAST_TIMELIKE = "past_timelike"
    PAST_LIGHTLIKE = "past_lightlike"
    SPACELIKE = "spacelike"


class Verdict(str, Enum):
    YES = "yes"
    NO = "no"
    BOUNDARY = "boundary"


class Relation(str, Enum):
    CHRONOLOGICAL = "chronological"
    CAUSAL = "causal"


class SliceKind(str, Enum):
    I = "I"  # noqa: E741
    J = "J"


@dataclass(frozen=True)
class SpacetimeEvent:
    t: float
    x: Tuple[float, float]

    @property
    def point(self) -> np.ndarray:
        return np.array(self.x, dtype=float)

    def to_list(self) -> list:
        return [self.t, list(self.x)]

    @classmethod
    def of(cls, t: float, x: Sequence[float]) -> "SpacetimeEvent":
        return cls(float(t), (float(x[0]), float(x[1])))


@dataclass(frozen=True, eq=False)
class CSTKScenario:
    """
    Spacetime R x S with the wind structure of its base

    Args:
        base: Wind structure on S
        horizon: Largest time separation served by memoized fronts
        dt: Optional front step override
        name: Scenario label used in reports
        source: Serialized scenario text, hashed into reports
    """

    base: WindStructure
    horizon: float = 2.0
    dt: Optional[float] = None
    name: str = "scenario"
    source: Optional[str] = None

    @property
    def killing_character(self) -> str:
        return self.base.killing_character

    @property
    def cell(self) -> float:
        return self.base.domain.cell


@dataclass
class QueryResult:
    p: SpacetimeEvent
    q: SpacetimeEvent
    relation: Relation
    verdict: Verdict
    margin_cells: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "p": self.p.to_list(),
            "q": self.q.to_list(),
            "relation": self.relation.value,
            "verdict": self.verdict.value,
            "margin_cells": self.margin_cells,
        }


@dataclass
class HorismosReport:
    p: SpacetimeEvent
    q: SpacetimeEvent
    target: float
    metric_tag: Optional[MetricTag]
    length_F: float
    length_Fl: float
    relative_error: float
    el_residual: float
    fit_rms: float
    passed: bool
    path: GeodesicPath = field(repr=False)

    def to_dict(self) -> dict:
        def finite(value: float) -> Optional[float]:
            return value if math.isfinite(value) else None

        return {
            "p": self.p.to_list(),
            "q": self.q.to_list(),
            "target": self.target,
            "metric_tag": self.metric_tag.value if self.metric_tag else None,
            "length_F": finite(self.length_F),
            "length_Fl": finite(self.length_Fl),
            "relative_error": finite(self.relative_error),
            "el_residual": finite(self.el_residual),
            "fit_rms": self.fit_rms,
            "passed": self.passed,
        }


class CausalEngine(BaseEngine):
    """Engine for cone classification and causal relations of a CSTK spacetime"""

    def __init__(self, reachability: Optional[ReachabilityEngine] = None, max_workers: Optional[int] = None):
        """
        Initialize Causal Engine

        Args:
            reachability: Engine computing the base fronts
            max_workers: Worker pool size
        """
        super().__init__(
            name="Causal",
            role="Causal relations of R x S through wind balls",
            max_workers=max_workers,
        )
        self.reachability = reachability or get_reachability_engine()
        self._families: Dict[tuple, ReachabilityFamily] = {}
        self._lock = threading.Lock()

    # -- memoized fronts ---------------------------------------------------

    def family(self, sc: CSTKScenario, x, direction: Direction = Direction.FORWARD) -> ReachabilityFamily:
        """Front family from x up to the scenario horizon, computed once per key"""
        x = np.asarray(x, dtype=float)
        key = (sc, round(float(x[0]), 12), round(float(x[1]), 12), Direction(direction).value)
        cached = self._families.get(key)
        if cached is not None:
            return cached
        with self._lock:
            cached = self._families.get(key)
            if cached is None:
                cached = self.reachability.propagate(sc.base, x, sc.horizon, dt=sc.dt, direction=direction)
                self._families[key] = cached
        return cached

    def clear_cache(self) -> None:
        with self._lock:
            self._families.clear()

    def _front_distance(self, family: ReachabilityFamily, s: float, point: np.ndarray) -> float:
        """Signed front distance at parameter s, linear between stored steps"""
        position = s / family.dt
        k0 = min(int(math.floor(position)), family.steps)
        k1 = min(k0 + 1, family.steps)
        weight = position - k0 if k1 > k0 else 0.0
        d0 = float(family.distance_at(k0 * family.dt, point)[0])
        if weight <= 1e-12:
            return d0
        d1 = float(family.distance_at(k1 * family.dt, point)[0])
        return (1.0 - weight) * d0 + weight * d1

    # -- pointwise cone data -----------------------------------------------

    def cone_membership(self, sc: CSTKScenario, event: SpacetimeEvent, vector: Sequence[float]) -> ConeClass:
        """
        Classify (a, w) at an event against the cone built from the base wind

        For a > 0 the ray direction w / a is compared with the indicatrix at x;
        past vectors mirror through -(a, w), which has the same ratio.
        """
        a = float(vector[0])
        w = np.array([float(vector[1]), float(vector[2])])
        if a == 0.0 and not np.any(w):
            raise ValueError("cone_membership needs a nonzero vector")
        self._require(sc, event)
        if a == 0.0:
            return ConeClass.SPACELIKE
        point = event.point[None, :]
        u = (w / a)[None, :]
        offset = float(sc.base.norm_field.evaluate_rows(point, u - sc.base.wind_rows(point))[0]) - 1.0
        future = a > 0.0
        if abs(offset) <= LIGHTLIKE_TOLERANCE:
            return ConeClass.FUTURE_LIGHTLIKE if future else ConeClass.PAST_LIGHTLIKE
        if offset < 0.0:
            return ConeClass.FUTURE_TIMELIKE if future else ConeClass.PAST_TIMELIKE
        return ConeClass.SPACELIKE

    def eval_G(self, sc: CSTKScenario, event: SpacetimeEvent, vector: Sequence[float]) -> float:
        """
        Lorentz-Finsler metric G(a, w) = a^2 - F(w)^2 of a timelike-K spacetime

        Past vectors are evaluated through -(a, w). On the axis w = 0 the value
        is a^2, where G is continuous but not smooth.
        """
        if not sc.base.all_mild:
            raise InapplicableError("G is only defined when K is timelike everywhere (all points mild)")
        self._require(sc, event)
        a = float(vector[0])
        w = np.array([float(vector[1]), float(vector[2])])
        if a < 0.0:
            a, w = -a, -w
        if not np.any(w):
            return a * a
        f = sc.base.eval_F(event.point, w)
        return a * a - f * f

    # -- relations ---------------------------------------------------------

    def chronological_query(self, sc: CSTKScenario, p: SpacetimeEvent, q: SpacetimeEvent, via: str = "forward") -> QueryResult:
        """
        p << q iff x1 lies in the open ball B+(x0, t1 - t0)

        Args:
            sc: Scenario
            p: Earlier event
            q: Later event
            via: "forward" uses B+(x0, s), "backward" uses B-(x1, s)

        Returns:
            QueryResult with a yes / no / boundary verdict
        """
        return self._query(sc, p, q, Relation.CHRONOLOGICAL, Direction(via))

    def causal_query(self, sc: CSTKScenario, p: SpacetimeEvent, q: SpacetimeEvent, via: str = "forward") -> QueryResult:
        """p <= q iff x1 lies in the c-ball of radius t1 - t0 (p = q always related)"""
        return self._query(sc, p, q, Relation.CAUSAL, Direction(via))

    def _query(self, sc, p, q, relation, direction) -> QueryResult:
        self._require(sc, p)
        self._require(sc, q)
        s = q.t - p.t
        if s <= 0.0:
            same = relation == Relation.CAUSAL and s == 0.0 and np.allclose(p.point, q.point)
            return QueryResult(p, q, relation, Verdict.YES if same else Verdict.NO)
        if s > sc.horizon + 1e-12:
            raise InsufficientHorizonError(f"Time separation {s:g} exceeds the scenario horizon {sc.horizon:g}")

        if direction == Direction.FORWARD:
            family = self.family(sc, p.point, Direction.FORWARD)
            target = q.point
        else:
            family = self.family(sc, q.point, Direction.BACKWARD)
            target = p.point
        distance = self._front_distance(family, s, target)
        cells = distance / sc.cell
        verdict = _verdict(relation, cells)
        self.logger.debug(f"{relation.value} {p.to_list()} -> {q.to_list()}: {verdict.value} ({cells:.3f} cells)")
        return QueryResult(p, q, relation, verdict, cells)

    def future_slice(
        self,
        sc: CSTKScenario,
        p: SpacetimeEvent,
        s: float,
        kind: SliceKind = SliceKind.J,
        direction: Direction = Direction.FORWARD,
    ) -> np.ndarray:
        """
        Slice t = t0 + s of I+(p) (open ball) or J+(p) (c-ball); backward
        slices t = t0 - s come from B- and c-balls of the past
        """
        self._require(sc, p)
        if s <= 0.0:
            raise ValueError("Slice offset s must be positive")
        if s > sc.horizon + 1e-12:
            raise InsufficientHorizonError(f"Slice offset {s:g} exceeds the scenario horizon {sc.horizon:g}")
        family = self.family(sc, p.point, direction)
        return family.open_ball(s) if SliceKind(kind) == SliceKind.I else family.c_ball(s)

    # -- horismos ----------------------------------------------------------

    def horismos_check(self, sc: CSTKScenario, p: SpacetimeEvent, q: SpacetimeEvent, degree: int = 3) -> HorismosReport:
        """
        Recover the boundary curve from p to q and test it as a unit extremizing geodesic

        The curve is traced back along front characteristics, fitted by a
        polynomial in t, and accepted when its F- or F_l-length matches
        t1 - t0 within 3% with Euler-Lagrange residual at most 1e-3.
        """
        return self.execute("horismos_check", self._horismos_check, sc, p, q, degree)

    def _horismos_check(self, sc, p, q, degree) -> HorismosReport:
        causal = self.causal_query(sc, p, q)
        chronological = self.chronological_query(sc, p, q)
        if causal.verdict == Verdict.NO or chronological.verdict == Verdict.YES:
            raise InapplicableError(
                f"Events are not horismotically related (causal={causal.verdict.value}, "
                f"chronological={chronological.verdict.value})"
            )
        s = q.t - p.t
        family = self.family(sc, p.point, Direction.FORWARD)
        traced = family.trace_characteristic(q.point, s)
        times = np.linspace(0.0, s, len(traced))

        fit_x = Polynomial.fit(times, traced[:, 0], min(degree, len(traced) - 1))
        fit_y = Polynomial.fit(times, traced[:, 1], min(degree, len(traced) - 1))
        fitted = np.column_stack([fit_x(times), fit_y(times)])
        fit_rms = float(np.sqrt(np.mean(np.sum((fitted - traced) ** 2, axis=1))))

        samples = np.linspace(0.0, s, 201)
        points = np.column_stack([fit_x(samples), fit_y(samples)])
        velocities = np.column_stack([fit_x.deriv()(samples), fit_y.deriv()(samples)])
        path = GeodesicPath.from_samples(sc.base, samples, points, velocities)

        errors = {
            MetricTag.F: abs(path.length_F - s) / s,
            MetricTag.F_L: abs(path.length_Fl - s) / s if math.isfinite(path.length_Fl) else math.inf,
        }
        tag = min(errors, key=errors.get)
        relative_error = errors[tag]
        if not math.isfinite(relative_error):
            tag = None
            residual = math.inf
        else:
            path.metric_tag = tag
            residual = euler_lagrange_residual(sc.base, path, tag)

        passed = tag is not None and relative_error <= LENGTH_TOLERANCE and residual <= RESIDUAL_TOLERANCE
        if not passed:
            self.logger.warning(
                f"Horismos curve to {q.to_list()} did not verify: length error {relative_error:.3g}, residual {residual:.3g}"
            )
        return HorismosReport(
            p=p,
            q=q,
            target=s,
            metric_tag=tag,
            length_F=path.length_F,
            length_Fl=path.length_Fl,
            relative_error=relative_error,
            el_residual=residual,
            fit_rms=fit_rms,
            passed=passed,
            path=path,
        )

    # -- sampled causal curves ---------------------------------------------

    def time_function_check(
        self,
        sc: CSTKScenario,
        count: int = 100,
        seed: Optional[int] = None,
        origin: Optional[Sequence[float]] = None,
        duration: Optional[float] = None,
        direction: Direction = Direction.FORWARD,
    ) -> dict:
        """
        t along sampled causal curves: strictly monotone, and no curve comes
        back to a (t-slice, cell) pair it has already left
        """
        if count < MIN_SAMPLER_COUNT:
            raise ConfigurationError(f"time_function_check needs count >= {MIN_SAMPLER_COUNT}, got {count}")
        direction = Direction(direction)
        domain = sc.base.domain
        x0 = np.asarray(origin if origin is not None else _box_centre(domain), dtype=float)
        duration = duration or min(sc.horizon, 0.25 * domain.diameter)
        sample = self.reachability.sample_wind_curves(
            sc.base, x0, duration, count, seed=seed, direction=direction, keep_paths=True
        )
        times = direction.sign * sample.times
        increments = np.diff(times)
        monotone = bool(np.all(increments > 0)) if direction == Direction.FORWARD else bool(np.all(increments < 0))

        slice_width = max(abs(float(increments[0])), 1e-12)
        slices = np.floor(np.abs(times) / slice_width + 1e-9).astype(int)
        returns = 0
        for path in sample.paths:
            visited = set()
            previous = None
            for slice_index, point in zip(slices, path):
                key = (int(slice_index),) + domain.index_of(point)
                if key != previous and key in visited:
                    returns += 1
                    break
                visited.add(key)
                previous = key

        passed = monotone and returns == 0
        return {
            "check": "time_function",
            "direction": direction.value,
            "curves": int(len(sample.paths)),
            "discarded": sample.discarded,
            "monotone": monotone,
            "slice_returns": returns,
            "status": "pass" if passed else "fail",
        }

    def strong_causality_check(
        self,
        sc: CSTKScenario,
        p: SpacetimeEvent,
        count: int = 1000,
        half_width: Optional[float] = None,
        half_height: Optional[float] = None,
        seed: Optional[int] = None,
    ) -> dict:
        """
        Sampled causal curves from p that leave the box around p through its
        top face never re-enter the half-size inner box

        t grows along every causal curve of R x S, so a re-entry can only come
        from broken sample times and a pass is a consistency check. Curves
        that loop back over the inner column in space are tallied as
        spatial_returns; they are allowed and show where the wind turns
        curves around.
        """
        self._require(sc, p)
        domain = sc.base.domain
        half_width = half_width or 8.0 * domain.cell
        half_height = half_height or half_width
        sample = self.reachability.sample_wind_curves(
            sc.base, p.point, 2.0 * half_height, count, seed=seed, keep_paths=True
        )
        tally = column_returns(sample.paths, p.t + sample.times, p.point, p.t, half_width, half_height)
        return {
            "check": "strong_causality",
            "event": p.to_list(),
            "curves": int(len(sample.paths)),
            **tally,
            "status": "pass" if tally["reentries"] == 0 else "fail",
        }

    def _require(self, sc: CSTKScenario, event: SpacetimeEvent) -> None:
        if not sc.base.domain.contains(event.point):
            raise OutOfDomainError(f"Event {event.to_list()} lies outside the base domain")


def _verdict(relation: Relation, cells: float) -> Verdict:
    if relation == Relation.CAUSAL:
        if cells <= 0.5:
            return Verdict.YES
        return Verdict.BOUNDARY if cells <= 1.0 else Verdict.NO
    if cells < -1.0:
        return Verdict.YES
    return Verdict.BOUNDARY if cells < -0.5 else Verdict.NO


def column_returns(
    paths: Sequence[np.ndarray],
    times: np.ndarray,
    centre: Sequence[float],
    t0: float,
    half_width: float,
    half_height: float,
) -> Dict[str, int]:
    """
    Tally sampled curves around the box |x - centre| <= half_width, |t - t0| <= half_height

    Args:
        paths: (samples, 2) positions per curve
        times: Sample times shared by every curve
        centre: Spatial centre of the box
        t0: Time of the box centre
        half_width: Spatial half size (max norm)
        half_height: Temporal half size

    Returns:
        Dict with top_exits (curves reaching the top face inside the column),
        reentries (later samples back in the half-size inner box) and
        spatial_returns (curves back over the inner column after leaving the
        outer one, at any time)
    """
    times = np.asarray(times, dtype=float)
    centre = np.asarray(centre, dtype=float)
    top_exits = reentries = spatial_returns = 0
    for path in paths:
        offsets = np.max(np.abs(np.asarray(path, dtype=float) - centre), axis=1)
        leaving = np.nonzero((times >= t0 + half_height) & (offsets <= half_width))[0]
        if leaving.size:
            top_exits += 1
            after = slice(int(leaving[0]) + 1, None)
            inner = (offsets[after] <= 0.5 * half_width) & (np.abs(times[after] - t0) <= 0.5 * half_height)
            if np.any(inner):
                reentries += 1
        outside = np.nonzero(offsets > half_width)[0]
        if outside.size and np.any(offsets[int(outside[0]) + 1 :] <= 0.5 * half_width):
            spatial_returns += 1
    return {"top_exits": top_exits, "reentries": reentries, "spatial_returns": spatial_returns}


def _box_centre(domain) -> List[float]:
    x0, x1, y0, y1 = domain.box
    centre = [0.5 * (x0 + x1), 0.5 * (y0 + y1)]
    if domain.contains(centre):
        return centre
    rows, cols = np.nonzero(~domain.excluded_mask)
    return domain.center_of(int(rows[len(rows) // 2]), int(cols[len(cols) // 2])).tolist()


_default_engine: Optional[CausalEngine] = None


def get_causal_engine() -> CausalEngine:
    global _default_engine
    if _default_engine is None:
        _default_engine = CausalEngine()
    return _default_engine
