"""
Geodesic Task for Wind Causality Studio

Integrates a geodesic from an initial velocity, or shoots geodesics between
two points and keeps the shortest as the main artifact.
"""

from typing import Literal, Optional

from pydantic import Field, model_validator

from app.engines.geodesic_engine import GeodesicPath, MetricTag, euler_lagrange_residual, get_geodesic_engine
from app.output.svg import emit_svg_polyline
from app.scenario.scenario_config import ScenarioConfig, build_wind_structure_from_config

from .base_task import BaseTask, Point, TaskParams, TaskResult


class GeodesicParams(TaskParams):
    start: Point
    target: Optional[Point] = None
    velocity: Optional[Point] = None
    length: Optional[float] = Field(default=None, gt=0)
    dt: Optional[float] = Field(default=None, gt=0)
    metric: Literal["F", "F_l"] = "F"

    @model_validator(mode="after")
    def _one_mode(self):
        if self.target is None and (self.velocity is None or self.length is None):
            raise ValueError("give either a target, or a velocity together with a length")
        if self.target is not None and self.velocity is not None:
            raise ValueError("target and velocity are mutually exclusive")
        return self


def _summary(ws, path: GeodesicPath) -> dict:
    return {
        "metric_tag": path.metric_tag.value,
        "start": path.start.tolist(),
        "end": path.end.tolist(),
        "duration": path.duration,
        "length_F": path.length_F,
        "length_Fl": path.length_Fl,
        "termination": path.termination.value,
        "energy_drift": path.energy_drift,
        "el_residual": euler_lagrange_residual(ws, path),
        "samples": len(path.times),
    }


class GeodesicTask(BaseTask):
    """Geodesics of F or F_l"""

    command = "geodesic"
    params_model = GeodesicParams

    def __init__(self):
        super().__init__(
            name="Geodesic",
            description="Integrate or shoot geodesics of the lower or upper sheet",
            expected_output="geodesic.csv, geodesic.svg, geodesic.json",
        )

    def run(self, config: ScenarioConfig, params: GeodesicParams) -> TaskResult:
        ws = build_wind_structure_from_config(config)
        engine = get_geodesic_engine()
        tag = MetricTag(params.metric)
        if params.target is None:
            paths = [engine.geodesic_ivp(ws, params.start, params.velocity, params.length, dt=params.dt, metric_tag=tag)]
            mode = "ivp"
        else:
            paths = engine.connect(ws, params.start, params.target, metric_tag=tag)
            mode = "connect"

        payload = {
            "scenario": config.name,
            "mode": mode,
            "metric": tag.value,
            "paths": [_summary(ws, path) for path in paths],
        }
        if not paths:
            self.logger.warning("No geodesic connects the two points inside the domain")
            return TaskResult(payload, {"geodesic.json": payload, "geodesic.svg": emit_svg_polyline([], ws.domain)})

        best = paths[0]
        artifacts = {
            "geodesic.csv": best.to_frame(),
            "geodesic.svg": emit_svg_polyline(best.points, ws.domain),
            "geodesic.json": payload,
        }
        return TaskResult(payload, artifacts)
