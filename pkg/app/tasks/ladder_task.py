"""
Ladder Task for Wind Causality Studio

Places a scenario on the upper causal ladder and writes the LadderReport.
"""

import json
from typing import Optional

from app.engines.ladder_classifier import get_ladder_classifier
from app.scenario.scenario_config import ScenarioConfig, build_scenario

from .base_task import BaseTask, TaskParams, TaskResult


class LadderParams(TaskParams):
    seed: Optional[int] = None
    reverify: bool = False


class LadderTask(BaseTask):
    """Causal ladder classification"""

    command = "ladder"
    params_model = LadderParams

    def __init__(self):
        super().__init__(
            name="Ladder",
            description="Probe causal continuity, simplicity, global hyperbolicity and Cauchy slices",
            expected_output="ladder.json",
        )

    def run(self, config: ScenarioConfig, params: LadderParams) -> TaskResult:
        sc = build_scenario(config)
        classifier = get_ladder_classifier()
        seed = config.numerics.seed if params.seed is None else params.seed
        try:
            report = classifier.classify(sc, seed=seed)
            text = report.to_json()
            payload = json.loads(text)
            if params.reverify:
                payload["reverified"] = {
                    level: [classifier.reverify_witness(sc, witness) for witness in verdict.witnesses]
                    for level, verdict in sorted(report.verdicts.items())
                }
        finally:
            classifier.causal.clear_cache()
        return TaskResult(payload, {"ladder.json": text if text.endswith("\n") else text + "\n"})
