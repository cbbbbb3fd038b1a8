"""
Causal Task for Wind Causality Studio

Answers chronological and causal queries between two events of the CSTK
spacetime, and verifies the connecting geodesic when the pair is horismotic.
"""

from typing import Literal

from app.engines.causal_engine import CausalEngine, CSTKScenario, SpacetimeEvent, Verdict, get_causal_engine
from app.scenario.scenario_config import ScenarioConfig, build_scenario

from .base_task import BaseTask, Event, TaskParams, TaskResult


class CausalParams(TaskParams):
    p: Event
    q: Event
    relation: Literal["chronological", "causal", "both"] = "both"
    via: Literal["forward", "backward"] = "forward"
    horismos: bool = True
    time_function: bool = False
    strong_causality: bool = False


class CausalTask(BaseTask):
    """Causal relation between two events"""

    command = "causal"
    params_model = CausalParams

    def __init__(self):
        super().__init__(
            name="Causal",
            description="Decide p << q and p <= q from wind balls of the base",
            expected_output="causal.json",
        )

    def run(self, config: ScenarioConfig, params: CausalParams) -> TaskResult:
        sc = build_scenario(config)
        engine = get_causal_engine()
        p = SpacetimeEvent.of(params.p[0], params.p[1:])
        q = SpacetimeEvent.of(params.q[0], params.q[1:])

        try:
            payload = self._answer(sc, engine, p, q, params, config.numerics.seed)
        finally:
            engine.clear_cache()
        return TaskResult(payload, {"causal.json": payload})

    def _answer(
        self, sc: CSTKScenario, engine: CausalEngine, p: SpacetimeEvent, q: SpacetimeEvent, params: CausalParams, seed: int
    ) -> dict:
        queries = {}
        if params.relation in ("chronological", "both"):
            queries["chronological"] = engine.chronological_query(sc, p, q, via=params.via)
        if params.relation in ("causal", "both"):
            queries["causal"] = engine.causal_query(sc, p, q, via=params.via)

        payload = {
            "scenario": sc.name,
            "killing_character": sc.killing_character,
            "queries": {name: result.to_dict() for name, result in queries.items()},
        }
        horismotic = (
            len(queries) == 2
            and queries["causal"].verdict == Verdict.YES
            and queries["chronological"].verdict == Verdict.NO
            and q.t > p.t
        )
        payload["horismos"] = horismotic
        if horismotic and params.horismos:
            payload["horismos_check"] = engine.horismos_check(sc, p, q).to_dict()
        if params.time_function:
            payload["time_function"] = engine.time_function_check(sc, seed=seed, origin=p.point)
        if params.strong_causality:
            payload["strong_causality"] = engine.strong_causality_check(sc, p, seed=seed)
        return payload
