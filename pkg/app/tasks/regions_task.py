"""
Regions Task for Wind Causality Studio

Classifies every grid cell as mild, critical, strong or excluded.
"""

from app.output.writers import region_image
from app.scenario.scenario_config import ScenarioConfig, build_wind_structure_from_config

from .base_task import BaseTask, TaskParams, TaskResult


class RegionsTask(BaseTask):
    """Region map of a scenario"""

    command = "regions"

    def __init__(self):
        super().__init__(
            name="Regions",
            description="Classify grid cells by the sign of F0(-W) - 1",
            expected_output="regions.pgm (grey levels 0 excluded, 85 mild, 170 critical, 255 strong), regions.json",
        )

    def run(self, config: ScenarioConfig, params: TaskParams) -> TaskResult:
        ws = build_wind_structure_from_config(config)
        grid = ws.region_grid
        payload = {
            "scenario": config.name,
            "resolution": [ws.domain.nx, ws.domain.ny],
            "killing_character": ws.killing_character,
            **grid.to_dict(),
        }
        self.logger.info(f"Region counts: {grid.counts}")
        return TaskResult(payload, {"regions.pgm": region_image(grid.codes), "regions.json": payload})
