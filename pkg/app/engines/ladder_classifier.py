"""
Ladder Classifier for Wind Causality Studio

Places a CSTK spacetime on the causal ladder above stable causality by probing
the metric conditions of its base:
- causally continuous: forward and backward c-balls are mutually reflexive
- causally simple: c-balls are closed (w-convexity); with causal K, minimizing
  geodesics realise the separation
- globally hyperbolic: intersections of forward and backward closed balls are compact
- Cauchy slices: closed balls are compact and geodesics are complete

Finite probes can refute but never certify a level, so every ``holds`` is
reported with the no_counterexample_at_resolution flag.
"""

import hashlib
import json
import math
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field
from scipy import ndimage

from app.config import settings
from app.engines.base_engine import BaseEngine
from app.engines.causal_engine import CausalEngine, CSTKScenario, get_causal_engine
from app.engines.geodesic_engine import GeodesicEngine, Termination, get_geodesic_engine
from app.engines.levelset import sample_field
from app.engines.reachability_engine import Direction, ReachabilityFamily
from app.errors import DegenerateDirectionError, NumericalFailureError
from app.geometry.wind_field import Admissibility, Disk, Rect

LENGTH_TOLERANCE = 0.03
MARGIN_CELLS = 2.0
RADIUS_LADDER = 10
ANCHORS = 4


class Level(str, Enum):
    CAUSALLY_CONTINUOUS = "causally_continuous"
    CAUSALLY_SIMPLE = "causally_simple"
    GLOBALLY_HYPERBOLIC = "globally_hyperbolic"
    CAUCHY_SLICES = "cauchy_slices"


LADDER = [
    Level.CAUSALLY_CONTINUOUS,
    Level.CAUSALLY_SIMPLE,
    Level.GLOBALLY_HYPERBOLIC,
    Level.CAUCHY_SLICES,
]


class Status(str, Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INCONCLUSIVE = "inconclusive"


class Outcome(str, Enum):
    OK = "ok"
    FAIL = "fail"
    TRUNCATED = "truncated"
    BAND = "band"
    SKIPPED = "skipped"


class Witness(BaseModel):
    """A probe that refutes a level, re-runnable through reverify_witness"""

    kind: str
    points: List[List[float]] = Field(default_factory=list)
    radii: List[float] = Field(default_factory=list)
    detail: Dict[str, Any] = Field(default_factory=dict)


class LevelVerdict(BaseModel):
    status: Status
    witnesses: List[Witness] = Field(default_factory=list)
    probes: int = 0
    tally: Dict[str, int] = Field(default_factory=dict)
    notes: List[str] = Field(default_factory=list)


class LadderReport(BaseModel):
    scenario_hash: str
    seed: int
    baseline: str = "stably_causal"
    killing_character: str
    verdicts: Dict[str, LevelVerdict]
    flags: List[str] = Field(default_factory=list)

    def status_of(self, level: Level) -> Status:
        return self.verdicts[Level(level).value].status

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), sort_keys=True, indent=2)


class ProbeResult(BaseModel):
    outcome: Outcome
    witness: Optional[Witness] = None
    note: Optional[str] = None


def scenario_fingerprint(sc: CSTKScenario) -> str:
    """sha256 of the scenario text, or of its structural description"""
    if sc.source is not None:
        text = sc.source
    else:
        ws = sc.base
        text = json.dumps(
            {
                "box": list(ws.domain.box),
                "resolution": [ws.domain.nx, ws.domain.ny],
                "exclusions": [repr(region) for region in ws.domain.exclusions],
                "wind": repr(ws.wind),
                "norm": repr(ws.norm_field),
                "horizon": sc.horizon,
                "dt": sc.dt,
            },
            sort_keys=True,
        )
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


class LadderClassifier(BaseEngine):
    """Engine testing the Finslerian equivalents of the causal ladder levels"""

    def __init__(
        self,
        causal: Optional[CausalEngine] = None,
        geodesics: Optional[GeodesicEngine] = None,
        max_workers: Optional[int] = None,
    ):
        """
        Initialize Ladder Classifier

        Args:
            causal: Engine holding the memoized fronts
            geodesics: Engine used for connections and completeness probes
            max_workers: Worker pool size for probe batches
        """
        super().__init__(
            name="Ladder",
            role="Causal ladder classification of CSTK spacetimes",
            max_workers=max_workers,
        )
        self.causal = causal or get_causal_engine()
        self.geodesics = geodesics or get_geodesic_engine()

    # -- probe scaffolding -------------------------------------------------

    def anchors(self, sc: CSTKScenario, seed: int, count: int = ANCHORS) -> List[np.ndarray]:
        """
        Deterministic probe centres in the inner part of the box, clear of exclusions

        Probes reuse the fronts of these centres, so each check costs a few
        propagations regardless of its probe count.
        """
        rng = np.random.default_rng(seed)
        domain = sc.base.domain
        x0, x1, y0, y1 = domain.box
        cx, cy = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
        hx, hy = 0.3 * (x1 - x0), 0.3 * (y1 - y0)
        found: List[np.ndarray] = []
        attempts = 0
        while len(found) < count and attempts < 1000:
            attempts += 1
            point = np.array([cx + hx * rng.uniform(-1, 1), cy + hy * rng.uniform(-1, 1)])
            if domain.distance_to_exclusions(point) < 3.0 * domain.cell:
                continue
            if any(np.linalg.norm(point - other) < 4.0 * domain.cell for other in found):
                continue
            found.append(point)
        return found

    def radius_ladder(self, sc: CSTKScenario) -> List[float]:
        return [sc.horizon * (k + 1) / RADIUS_LADDER for k in range(RADIUS_LADDER)]

    def _front(self, sc: CSTKScenario, x, direction: Direction) -> ReachabilityFamily:
        return self.causal.family(sc, x, direction)

    def _distance_cells(self, sc: CSTKScenario, x, direction: Direction, r: float, point) -> float:
        family = self._front(sc, x, direction)
        return float(family.distance_at(r, np.asarray(point, dtype=float))[0]) / sc.cell

    def _arrival(self, sc: CSTKScenario, x, y) -> float:
        """Earliest c-ball arrival at y from x, the separation away from the diagonal"""
        family = self._front(sc, x, Direction.FORWARD)
        domain = sc.base.domain
        arrival = family.earliest_arrival
        row, col = domain.index_of(y)
        window = arrival[max(row - 1, 0) : row + 2, max(col - 1, 0) : col + 2]
        if not np.all(np.isfinite(window)):
            return float(arrival[row, col])
        return float(sample_field(domain.xs, domain.ys, arrival, np.asarray(y, dtype=float))[0])

    def _touches(self, sc: CSTKScenario, mask: np.ndarray) -> Tuple[bool, bool]:
        """(near an exclusion, near the box edge) within MARGIN_CELLS"""
        domain = sc.base.domain
        if not np.any(mask):
            return False, False
        grown = ndimage.binary_dilation(mask, iterations=int(MARGIN_CELLS))
        near_exclusion = bool(np.any(grown & domain.excluded_mask))
        rim = int(MARGIN_CELLS)
        edge = np.zeros_like(mask)
        edge[:rim, :] = edge[-rim:, :] = True
        edge[:, :rim] = edge[:, -rim:] = True
        return near_exclusion, bool(np.any(mask & edge))

    def _fold(self, results: Sequence[ProbeResult], sc: CSTKScenario, empty_note: str) -> LevelVerdict:
        """Deterministic fold of probe outcomes into a verdict"""
        tally: Dict[str, int] = {}
        for result in results:
            tally[result.outcome.value] = tally.get(result.outcome.value, 0) + 1
        witnesses = [r.witness for r in results if r.outcome == Outcome.FAIL and r.witness is not None]
        notes = sorted({r.note for r in results if r.note})
        extension = self.analytic_extension(sc)
        if witnesses:
            status = Status.FAILS
        elif tally.get(Outcome.TRUNCATED.value, 0) and not extension:
            status = Status.INCONCLUSIVE
            notes.append("probes reached the bounding box (domain truncation)")
        elif tally.get(Outcome.OK.value, 0) or (extension and tally.get(Outcome.TRUNCATED.value, 0)):
            status = Status.HOLDS
        else:
            status = Status.INCONCLUSIVE
            notes.append(empty_note)
        return LevelVerdict(status=status, witnesses=witnesses, probes=len(results), tally=tally, notes=notes)

    @staticmethod
    def analytic_extension(sc: CSTKScenario) -> bool:
        return sc.base.is_constant and not sc.base.domain.exclusions

    # -- causally continuous -----------------------------------------------

    def check_reflexivity(
        self,
        sc: CSTKScenario,
        probes: Optional[Sequence[Tuple[Sequence[float], Sequence[float], float]]] = None,
        seed: Optional[int] = None,
    ) -> LevelVerdict:
        """
        x1 in the closed forward ball of x0 iff x0 in the closed backward ball of x1

        Args:
            sc: Scenario
            probes: (x0, x1, r) triples; default random triples over the anchors
            seed: Probe seed

        Returns:
            LevelVerdict for causally_continuous
        """
        seed = settings.default_seed if seed is None else seed
        if probes is None:
            probes = self._pair_probes(sc, seed, settings.reflexivity_probes)
        results = self.map_parallel(lambda probe: self.reflexivity_probe(sc, *probe), probes)
        verdict = self._fold(results, sc, "every probe landed within the one-cell band")
        if sc.killing_character != "arbitrary":
            if verdict.status == Status.FAILS:
                verdict.status = Status.INCONCLUSIVE
                verdict.notes.append("probe disagreement contradicts continuity of causal-K splittings; resolution limited")
            else:
                verdict.status = Status.HOLDS
                verdict.notes.append("causally continuous for causal K; probes recorded as evidence")
        self.logger.info(f"Reflexivity: {verdict.status.value} over {verdict.probes} probes")
        return verdict

    def reflexivity_probe(self, sc: CSTKScenario, x0, x1, r: float) -> ProbeResult:
        forward = self._distance_cells(sc, x0, Direction.FORWARD, r, x1)
        backward = self._distance_cells(sc, x1, Direction.BACKWARD, r, x0)
        if (forward <= 0 and backward > 1.0) or (backward <= 0 and forward > 1.0):
            return ProbeResult(
                outcome=Outcome.FAIL,
                witness=Witness(
                    kind="reflexivity",
                    points=[_as_list(x0), _as_list(x1)],
                    radii=[r],
                    detail={"forward_cells": round(forward, 6), "backward_cells": round(backward, 6)},
                ),
            )
        if abs(forward) <= 1.0 or abs(backward) <= 1.0:
            return ProbeResult(outcome=Outcome.BAND)
        return ProbeResult(outcome=Outcome.OK)

    def _pair_probes(self, sc: CSTKScenario, seed: int, count: int):
        anchors = self.anchors(sc, seed)
        pairs = [(i, j) for i in range(len(anchors)) for j in range(len(anchors)) if i != j]
        radii = self.radius_ladder(sc)
        if not pairs:
            return []
        rng = np.random.default_rng(seed + 1)
        picks = [(pairs[rng.integers(len(pairs))], radii[rng.integers(len(radii))]) for _ in range(count)]
        return [(anchors[i], anchors[j], r) for (i, j), r in picks]

    # -- causally simple ---------------------------------------------------

    def check_wconvex(
        self,
        sc: CSTKScenario,
        probes: Optional[Sequence[Tuple[Sequence[float], Sequence[float]]]] = None,
        seed: Optional[int] = None,
    ) -> LevelVerdict:
        """
        Closedness of c-balls, plus minimizing connections when K is causal

        Returns:
            LevelVerdict for causally_simple
        """
        seed = settings.default_seed if seed is None else seed
        anchors = self.anchors(sc, seed)
        closure_probes = [(x, r, d) for x in anchors for r in self.radius_ladder(sc) for d in (Direction.FORWARD,)]
        results = self.map_parallel(lambda probe: self.closure_probe(sc, *probe), closure_probes)

        if sc.killing_character != "arbitrary":
            if probes is None:
                probes = self._connection_probes(sc, seed, anchors, settings.wconvex_probes)
            results += [self.connection_probe(sc, x, y) for x, y in probes]

        verdict = self._fold(results, sc, "no probe with finite separation")
        skipped = verdict.tally.get(Outcome.SKIPPED.value, 0)
        if skipped:
            verdict.notes.append(f"{skipped} probe(s) with infinite separation skipped")
        self.logger.info(f"w-convexity: {verdict.status.value} over {verdict.probes} probes")
        return verdict

    def closure_probe(self, sc: CSTKScenario, x, r: float, direction: Direction = Direction.FORWARD) -> ProbeResult:
        mask = self._front(sc, x, direction).c_ball(r)
        near_exclusion, near_edge = self._touches(sc, mask)
        if near_exclusion:
            return ProbeResult(
                outcome=Outcome.FAIL,
                witness=Witness(
                    kind="ball_closure",
                    points=[_as_list(x)],
                    radii=[r],
                    detail={"direction": Direction(direction).value, "reason": "c-ball accumulates at an excluded region"},
                ),
            )
        if near_edge:
            return ProbeResult(outcome=Outcome.TRUNCATED)
        return ProbeResult(outcome=Outcome.OK)

    def connection_probe(self, sc: CSTKScenario, x, y) -> ProbeResult:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        separation = self._arrival(sc, x, y)
        if not math.isfinite(separation):
            return ProbeResult(outcome=Outcome.SKIPPED)
        paths = self.geodesics.connect(sc.base, x, y)
        tolerance = max(LENGTH_TOLERANCE * separation, MARGIN_CELLS * sc.cell / max(sc.base.max_speed, 1e-12))
        best = min((p.length_F for p in paths), default=math.inf)
        if abs(best - separation) <= tolerance:
            return ProbeResult(outcome=Outcome.OK)
        return ProbeResult(
            outcome=Outcome.FAIL,
            witness=Witness(
                kind="minimizer",
                points=[_as_list(x), _as_list(y)],
                radii=[separation],
                detail={
                    "separation": round(separation, 6),
                    "geodesics": len(paths),
                    "shortest": round(best, 6) if math.isfinite(best) else None,
                },
            ),
        )

    def _connection_probes(self, sc: CSTKScenario, seed: int, anchors, count: int):
        rng = np.random.default_rng(seed + 2)
        domain = sc.base.domain
        x0, x1, y0, y1 = domain.box
        probes = list(self._straddling_pairs(sc))
        wanted = count + len(probes)
        attempts = 0
        while len(probes) < wanted and anchors and attempts < 20 * max(count, 1):
            attempts += 1
            x = anchors[rng.integers(len(anchors))]
            y = np.array([rng.uniform(x0, x1), rng.uniform(y0, y1)])
            if domain.distance_to_exclusions(y) < 3.0 * domain.cell or domain.distance_to_box(y) < 3.0 * domain.cell:
                continue
            if np.linalg.norm(y - x) < 4.0 * domain.cell:
                continue
            probes.append((x, y))
        return probes

    def _straddling_pairs(self, sc: CSTKScenario) -> List[Tuple[np.ndarray, np.ndarray]]:
        """Point pairs on opposite sides of each excluded region"""
        domain = sc.base.domain
        pairs = []
        for region in domain.exclusions:
            centre, radius = _region_centre(region)
            reach = min(max(10.0 * radius, 1.0), 0.45 * min(domain.box[1] - domain.box[0], domain.box[3] - domain.box[2]))
            x = centre - np.array([reach, 0.0])
            y = centre + np.array([reach, 0.0])
            if domain.contains(x) and domain.contains(y):
                pairs.append((x, y))
        return pairs

    # -- globally hyperbolic -----------------------------------------------

    def check_global_hyperbolicity(
        self,
        sc: CSTKScenario,
        probes: Optional[Sequence[Tuple[Sequence[float], Sequence[float], float, float]]] = None,
        seed: Optional[int] = None,
    ) -> LevelVerdict:
        """
        Compactness of closed forward-backward ball intersections

        Returns:
            LevelVerdict for globally_hyperbolic
        """
        seed = settings.default_seed if seed is None else seed
        if probes is None:
            probes = self._intersection_probes(sc, seed, settings.hyperbolicity_probes)
        results = self.map_parallel(lambda probe: self.intersection_probe(sc, *probe), probes)
        verdict = self._fold(results, sc, "all intersections were empty")
        self.logger.info(f"Global hyperbolicity: {verdict.status.value} over {verdict.probes} probes")
        return verdict

    def intersection_probe(self, sc: CSTKScenario, x, y, r1: float, r2: float) -> ProbeResult:
        forward = self._front(sc, x, Direction.FORWARD).c_ball(r1)
        backward = self._front(sc, y, Direction.BACKWARD).c_ball(r2)
        overlap = forward & backward
        if not np.any(overlap):
            return ProbeResult(outcome=Outcome.SKIPPED)
        near_exclusion, near_edge = self._touches(sc, overlap)
        if near_exclusion:
            return ProbeResult(
                outcome=Outcome.FAIL,
                witness=Witness(
                    kind="intersection",
                    points=[_as_list(x), _as_list(y)],
                    radii=[r1, r2],
                    detail={"cells": int(np.sum(overlap)), "reason": "intersection accumulates at an excluded region"},
                ),
            )
        if near_edge:
            return ProbeResult(outcome=Outcome.TRUNCATED)
        return ProbeResult(outcome=Outcome.OK)

    def _intersection_probes(self, sc: CSTKScenario, seed: int, count: int):
        anchors = self.anchors(sc, seed)
        rng = np.random.default_rng(seed + 3)
        radii = self.radius_ladder(sc)
        probes = []
        for x, y in self._straddling_pairs(sc):
            gap = self._arrival(sc, x, y)
            if math.isfinite(gap) and gap <= sc.horizon:
                probes.append((x, y, min(0.6 * gap, sc.horizon), min(0.6 * gap, sc.horizon)))
        pairs = [(i, j) for i in range(len(anchors)) for j in range(len(anchors))]
        for _ in range(count):
            i, j = pairs[rng.integers(len(pairs))]
            probes.append((anchors[i], anchors[j], radii[rng.integers(len(radii) // 2)], radii[rng.integers(len(radii) // 2)]))
        return probes

    # -- Cauchy slices -----------------------------------------------------

    def check_cauchy(self, sc: CSTKScenario, count: Optional[int] = None, seed: Optional[int] = None) -> LevelVerdict:
        """
        Compact closed balls in both directions plus geodesic completeness

        Completeness probes integrate unit-speed geodesics for twice the
        domain diameter; reaching an excluded region in finite parameter is an
        incompleteness witness, leaving the box is truncation.

        Returns:
            LevelVerdict for cauchy_slices
        """
        seed = settings.default_seed if seed is None else seed
        count = settings.completeness_probes if count is None else count
        anchors = self.anchors(sc, seed)
        ball_probes = [(x, r, d) for x in anchors for r in self.radius_ladder(sc) for d in Direction]
        results = self.map_parallel(lambda probe: self.closure_probe(sc, *probe), ball_probes)
        starts = self._geodesic_probes(sc, seed, count)
        results += self.map_parallel(lambda probe: self.completeness_probe(sc, *probe), starts)
        verdict = self._fold(results, sc, "no completeness probe could be started")
        self.logger.info(f"Cauchy slices: {verdict.status.value} over {verdict.probes} probes")
        return verdict

    def completeness_probe(self, sc: CSTKScenario, start, direction) -> ProbeResult:
        ws = sc.base
        start = np.asarray(start, dtype=float)
        direction = np.asarray(direction, dtype=float)
        if ws.admissible(start, direction) != Admissibility.INTERIOR:
            return ProbeResult(outcome=Outcome.SKIPPED)
        velocity = direction / ws.eval_F(start, direction)
        length = 2.0 * ws.domain.diameter / max(float(np.linalg.norm(velocity)), 1e-9)
        try:
            path = self.geodesics.geodesic_ivp(ws, start, velocity, length, dt=length / 400.0)
        except (DegenerateDirectionError, NumericalFailureError) as e:
            return ProbeResult(outcome=Outcome.SKIPPED, note=f"completeness probe not integrable: {e.__class__.__name__}")
        if path.termination == Termination.HIT_EXCLUSION:
            return ProbeResult(
                outcome=Outcome.FAIL,
                witness=Witness(
                    kind="incomplete_geodesic",
                    points=[_as_list(start), _as_list(direction)],
                    radii=[round(path.duration, 6)],
                    detail={"length_F": round(path.length_F, 6), "end": _as_list(path.end)},
                ),
            )
        if path.termination in (Termination.LEFT_DOMAIN, Termination.NEAR_LIGHTLIKE):
            return ProbeResult(outcome=Outcome.TRUNCATED)
        return ProbeResult(outcome=Outcome.OK)

    def _geodesic_probes(self, sc: CSTKScenario, seed: int, count: int):
        domain = sc.base.domain
        rng = np.random.default_rng(seed + 4)
        probes = []
        targeted = self._straddling_pairs(sc)
        for x, y in targeted:
            centre = 0.5 * (x + y)
            probes.append((x, (centre - x) / np.linalg.norm(centre - x)))
        x0, x1, y0, y1 = domain.box
        attempts = 0
        while len(probes) < count + len(targeted) and attempts < 20 * max(count, 1):
            attempts += 1
            start = np.array([rng.uniform(x0, x1), rng.uniform(y0, y1)])
            if domain.distance_to_exclusions(start) < 3.0 * domain.cell or domain.distance_to_box(start) < 3.0 * domain.cell:
                continue
            angle = rng.uniform(0.0, 2.0 * math.pi)
            probes.append((start, np.array([math.cos(angle), math.sin(angle)])))
        return probes

    # -- report ------------------------------------------------------------

    def assemble_report(self, sc: CSTKScenario, verdicts: Dict[Level, LevelVerdict], seed: int) -> LadderReport:
        """
        Reconcile the four verdicts along cauchy => GH => simple => continuous

        A level above a failing level cannot hold: a holds verdict becomes
        inconclusive, an inconclusive one fails with the lower witnesses.
        A holding level lifts inconclusive levels below it to holds.
        """
        verdicts = {Level(level): verdict.model_copy(deep=True) for level, verdict in verdicts.items()}
        for i, level in enumerate(LADDER):
            failing = [lower for lower in LADDER[:i] if verdicts[lower].status == Status.FAILS]
            if not failing:
                continue
            lower = failing[0]
            current = verdicts[level]
            inherited = [w for w in verdicts[lower].witnesses if w not in current.witnesses]
            if current.status == Status.HOLDS:
                current.status = Status.INCONCLUSIVE
                current.notes.append(f"ladder inconsistency: {lower.value} fails")
                current.witnesses += inherited
            elif current.status == Status.INCONCLUSIVE:
                current.status = Status.FAILS
                current.notes.append(f"implied by failure of {lower.value}")
                current.witnesses += inherited
        for i, level in enumerate(LADDER):
            if verdicts[level].status != Status.HOLDS:
                continue
            for lower in LADDER[:i]:
                if verdicts[lower].status == Status.INCONCLUSIVE:
                    verdicts[lower].status = Status.HOLDS
                    verdicts[lower].notes.append(f"implied by {level.value}")

        flags = []
        if self.analytic_extension(sc):
            flags.append("analytic_extension")
        if any(v.status == Status.HOLDS for v in verdicts.values()):
            flags.append("no_counterexample_at_resolution")
        if self.kropina_diagonal(sc):
            flags.append("kropina_diagonal")

        return LadderReport(
            scenario_hash=scenario_fingerprint(sc),
            seed=seed,
            killing_character=sc.killing_character,
            verdicts={level.value: verdicts[level] for level in LADDER},
            flags=sorted(flags),
        )

    def kropina_diagonal(self, sc: CSTKScenario) -> bool:
        """True when a critical point never enters its own open ball"""
        codes = sc.base.region_grid.codes
        rows, cols = np.nonzero(codes == 1)
        if rows.size == 0:
            return False
        middle = len(rows) // 2
        point = sc.base.domain.center_of(int(rows[middle]), int(cols[middle]))
        family = self.causal.reachability.propagate(sc.base, point, sc.horizon, dt=sc.dt, watch=[point])
        return math.isinf(family.first_entry(0).value)

    def classify(self, sc: CSTKScenario, seed: Optional[int] = None) -> LadderReport:
        """Run all four checks and assemble the report"""
        seed = settings.default_seed if seed is None else seed
        return self.execute("classify", self._classify, sc, seed)

    def _classify(self, sc: CSTKScenario, seed: int) -> LadderReport:
        verdicts = {
            Level.CAUSALLY_CONTINUOUS: self.check_reflexivity(sc, seed=seed),
            Level.CAUSALLY_SIMPLE: self.check_wconvex(sc, seed=seed),
            Level.GLOBALLY_HYPERBOLIC: self.check_global_hyperbolicity(sc, seed=seed),
            Level.CAUCHY_SLICES: self.check_cauchy(sc, seed=seed),
        }
        return self.assemble_report(sc, verdicts, seed)

    # -- witnesses ---------------------------------------------------------

    def reverify_witness(self, sc: CSTKScenario, witness: Witness) -> bool:
        """Re-run the single probe behind a witness; True when it fails again"""
        runners: Dict[str, Callable[[], ProbeResult]] = {
            "reflexivity": lambda: self.reflexivity_probe(sc, witness.points[0], witness.points[1], witness.radii[0]),
            "ball_closure": lambda: self.closure_probe(
                sc, witness.points[0], witness.radii[0], Direction(witness.detail.get("direction", "forward"))
            ),
            "minimizer": lambda: self.connection_probe(sc, witness.points[0], witness.points[1]),
            "intersection": lambda: self.intersection_probe(
                sc, witness.points[0], witness.points[1], witness.radii[0], witness.radii[1]
            ),
            "incomplete_geodesic": lambda: self.completeness_probe(sc, witness.points[0], witness.points[1]),
        }
        if witness.kind not in runners:
            raise ValueError(f"Unknown witness kind: {witness.kind}")
        return runners[witness.kind]().outcome == Outcome.FAIL


def _as_list(point) -> List[float]:
    return [round(float(c), 12) for c in np.asarray(point, dtype=float)]


def _region_centre(region) -> Tuple[np.ndarray, float]:
    if isinstance(region, Disk):
        return np.asarray(region.center, dtype=float), float(region.radius)
    if isinstance(region, Rect):
        return np.asarray(region.center, dtype=float), 0.5 * max(region.xmax - region.xmin, region.ymax - region.ymin)
    xmin, xmax, ymin, ymax = region.bounds()
    return np.array([0.5 * (xmin + xmax), 0.5 * (ymin + ymax)]), 0.5 * max(xmax - xmin, ymax - ymin)


_default_classifier: Optional[LadderClassifier] = None


def get_ladder_classifier() -> LadderClassifier:
    global _default_classifier
    if _default_classifier is None:
        _default_classifier = LadderClassifier()
    return _default_classifier
