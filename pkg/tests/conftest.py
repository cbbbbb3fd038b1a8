"""Shared fixtures: small-grid scenarios so the suite runs at desk scale"""

import pytest

from app.engines.causal_engine import CausalEngine, CSTKScenario
from app.engines.reachability_engine import ReachabilityEngine
from app.geometry.wind_field import ConstantWind, Disk, RigidRotationWind, build_wind_structure
from app.scenario.builtins import get_builtin

BOX = (-3.0, 3.0, -3.0, 3.0)


@pytest.fixture
def reach():
    return ReachabilityEngine()


@pytest.fixture
def causal(reach):
    return CausalEngine(reachability=reach)


@pytest.fixture
def zero_wind():
    return build_wind_structure(BOX, (64, 64), ConstantWind(0.0, 0.0))


@pytest.fixture
def mild_wind():
    return build_wind_structure(BOX, (96, 96), ConstantWind(0.5, 0.0))


@pytest.fixture
def critical_wind():
    return build_wind_structure(BOX, (48, 48), ConstantWind(1.0, 0.0))


@pytest.fixture
def strong_wind():
    return build_wind_structure((-2.0, 4.0, -3.0, 3.0), (96, 96), ConstantWind(2.0, 0.0))


@pytest.fixture
def rotation():
    return build_wind_structure((-2.0, 2.0, -2.0, 2.0), (64, 64), RigidRotationWind(1.0))


@pytest.fixture
def punctured():
    return build_wind_structure(
        (-2.0, 2.0, -2.0, 2.0), (48, 48), ConstantWind(0.0, 0.0), exclusions=[Disk((0.0, 0.0), 0.1)]
    )


@pytest.fixture
def strong_scenario(strong_wind):
    return CSTKScenario(base=strong_wind, horizon=1.2, name="strong")


@pytest.fixture
def zero_scenario(zero_wind):
    return CSTKScenario(base=zero_wind, horizon=2.0, name="zero")


@pytest.fixture
def small_builtin():
    """Built-in scenario at a small resolution"""

    def make(name: str, resolution=(48, 48), **overrides):
        return get_builtin(name).with_overrides(resolution=resolution, **overrides)

    return make
