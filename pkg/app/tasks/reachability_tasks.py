"""
Reachability Tasks for Wind Causality Studio

Commands built on front propagation:
- ball: closed c-ball and open wind ball masks plus the c-ball contour
- dist: F-separation between two points
- crosscheck: front vs fast sweeping vs Monte-Carlo sampling
"""

from typing import Literal, Optional

import numpy as np
from pydantic import Field

from app.config import settings
from app.engines.reachability_engine import MIN_SAMPLER_COUNT, Direction, get_reachability_engine
from app.output.svg import emit_svg_contour
from app.output.writers import mask_image
from app.scenario.scenario_config import ScenarioConfig, build_wind_structure_from_config

from .base_task import BaseTask, Point, TaskParams, TaskResult


class BallParams(TaskParams):
    center: Point
    r: float = Field(gt=0)
    direction: Literal["forward", "backward"] = "forward"


class BallTask(BaseTask):
    """Wind balls around a point"""

    command = "ball"
    params_model = BallParams

    def __init__(self):
        super().__init__(
            name="Ball",
            description="Propagate the exact-time front and extract c-ball and open ball at r",
            expected_output="ball_closed.pgm, ball_open.pgm, ball.svg, ball.json",
        )

    def run(self, config: ScenarioConfig, params: BallParams) -> TaskResult:
        ws = build_wind_structure_from_config(config)
        engine = get_reachability_engine()
        family = engine.propagate(
            ws, params.center, params.r, dt=config.numerics.dt, direction=Direction(params.direction), checkpoints=[params.r]
        )
        closed = family.c_ball(params.r)
        open_ = family.open_ball(params.r)
        area = ws.domain.dx * ws.domain.dy
        payload = {
            "scenario": config.name,
            "center": list(params.center),
            "r": params.r,
            "direction": params.direction,
            "dt": family.dt,
            "steps": family.steps,
            "cells_closed": int(closed.sum()),
            "cells_open": int(open_.sum()),
            "area_closed": float(closed.sum()) * area,
            "area_open": float(open_.sum()) * area,
            "center_in_open_ball": bool(open_[ws.domain.index_of(params.center)]),
        }
        artifacts = {
            "ball_closed.pgm": mask_image(closed),
            "ball_open.pgm": mask_image(open_),
            "ball.svg": emit_svg_contour(closed, ws.domain),
            "ball.json": payload,
        }
        return TaskResult(payload, artifacts)


class DistParams(TaskParams):
    x: Point
    y: Point
    horizon: Optional[float] = Field(default=None, gt=0)


class DistTask(BaseTask):
    """F-separation d_F(x, y)"""

    command = "dist"
    params_model = DistParams

    def __init__(self):
        super().__init__(
            name="Dist",
            description="Earliest parameter length at which y enters the open wind ball of x",
            expected_output="dist.json",
        )

    def run(self, config: ScenarioConfig, params: DistParams) -> TaskResult:
        ws = build_wind_structure_from_config(config)
        horizon = params.horizon or config.numerics.horizon
        result = get_reachability_engine().separation(ws, params.x, params.y, horizon, dt=config.numerics.dt)
        payload = {
            "scenario": config.name,
            "x": list(params.x),
            "y": list(params.y),
            "horizon": horizon,
            "cell": ws.domain.cell,
            **result.to_dict(),
        }
        if result.lower_bound is not None:
            self.logger.warning(f"No entry before horizon {horizon}; reporting d_F >= {horizon}")
        return TaskResult(payload, {"dist.json": payload})


class CrosscheckParams(TaskParams):
    center: Point
    r: float = Field(gt=0)
    count: int = Field(default=2000, ge=MIN_SAMPLER_COUNT)


class CrosscheckTask(BaseTask):
    """Agreement between the three reachability methods"""

    command = "crosscheck"
    params_model = CrosscheckParams

    def __init__(self):
        super().__init__(
            name="Crosscheck",
            description="Compare front propagation with fast sweeping and sampled wind curves",
            expected_output="crosscheck.json",
        )

    def run(self, config: ScenarioConfig, params: CrosscheckParams) -> TaskResult:
        ws = build_wind_structure_from_config(config)
        count = min(params.count, max(settings.sampler_count, MIN_SAMPLER_COUNT))
        report = get_reachability_engine().crosscheck(
            ws, np.asarray(params.center, dtype=float), params.r, count=count, seed=config.numerics.seed
        )
        payload = {"scenario": config.name, **report}
        if report["status"] != "agree":
            self.logger.warning(f"Methods disagree: {report}")
        return TaskResult(payload, {"crosscheck.json": payload})
