"""
Norm Task for Wind Causality Studio

Evaluates both Zermelo sheets F and F_l for a list of (point, vector) pairs.
"""

from typing import List

import numpy as np
from pydantic import Field

from app.errors import OutOfDomainError
from app.scenario.scenario_config import ScenarioConfig, build_wind_structure_from_config

from .base_task import BaseTask, NormSample, TaskParams, TaskResult


class NormParams(TaskParams):
    samples: List[NormSample] = Field(min_length=1)


class NormTask(BaseTask):
    """F and F_l values at given points and vectors"""

    command = "norm"
    params_model = NormParams

    def __init__(self):
        super().__init__(
            name="Norm",
            description="Evaluate the lower and upper Zermelo sheets",
            expected_output="norm.json",
        )

    def run(self, config: ScenarioConfig, params: NormParams) -> TaskResult:
        ws = build_wind_structure_from_config(config)
        points = np.array([s[:2] for s in params.samples], dtype=float)
        vectors = np.array([s[2:] for s in params.samples], dtype=float)
        for p in points:
            if not ws.domain.contains(p):
                raise OutOfDomainError(f"Point {p.tolist()} is outside the domain or excluded")

        lower, upper = ws.sheet_roots(points, vectors)
        rows = []
        for p, v, f, fl in zip(points, vectors, lower, upper):
            rows.append(
                {
                    "p": p.tolist(),
                    "v": v.tolist(),
                    "F": float(f),
                    "F_l": float(fl),
                    "region": ws.classify_point(p).value,
                    "admissibility": ws.admissible(p, v).value,
                }
            )
        payload = {"scenario": config.name, "values": rows}
        return TaskResult(payload, {"norm.json": payload})
