"""
Built-in scenario catalogue

Each entry is a ScenarioConfig with a closed-form reference behaviour:
- zero_wind: Euclidean plane, balls are disks
- mild_constant, critical_constant, strong_constant: W = (0.5, 0), (1, 0), (2, 0)
- rigid_rotation: W = (-y, x), critical along the unit circle
- rigid_rotation_mild: the same wind on a box small enough to stay mild
- radial: W = 0.5 (x, y)
- punctured_plane: zero wind with a disk of radius 0.1 removed at the origin
"""

from typing import Callable, Dict, List

from app.scenario.scenario_config import ScenarioConfig

BOX = [-3.0, 3.0, -3.0, 3.0]


def _config(name: str, wind: dict, box=BOX, horizon: float = 2.0, exclusions=None, resolution=(128, 128)) -> ScenarioConfig:
    return ScenarioConfig.model_validate(
        {
            "format": 1,
            "name": name,
            "domain": {"box": list(box), "resolution": list(resolution)},
            "norm": {"kind": "euclidean"},
            "wind": wind,
            "exclusions": exclusions or [],
            "numerics": {"horizon": horizon},
        }
    )


BUILTINS: Dict[str, Callable[[], ScenarioConfig]] = {
    "zero_wind": lambda: _config("zero_wind", {"kind": "constant", "wx": 0.0, "wy": 0.0}),
    "mild_constant": lambda: _config("mild_constant", {"kind": "constant", "wx": 0.5, "wy": 0.0}, horizon=2.5),
    "critical_constant": lambda: _config("critical_constant", {"kind": "constant", "wx": 1.0, "wy": 0.0}),
    "strong_constant": lambda: _config(
        "strong_constant", {"kind": "constant", "wx": 2.0, "wy": 0.0}, box=[-2.0, 4.0, -3.0, 3.0], horizon=1.2
    ),
    "rigid_rotation": lambda: _config(
        "rigid_rotation", {"kind": "rigid_rotation", "omega": 1.0}, box=[-2.0, 2.0, -2.0, 2.0], horizon=1.0
    ),
    "rigid_rotation_mild": lambda: _config(
        "rigid_rotation_mild", {"kind": "rigid_rotation", "omega": 1.0}, box=[-0.6, 0.6, -0.6, 0.6], horizon=0.5
    ),
    "radial": lambda: _config("radial", {"kind": "radial", "k": 0.5}, box=[-2.0, 2.0, -2.0, 2.0], horizon=1.0),
    "punctured_plane": lambda: _config(
        "punctured_plane",
        {"kind": "constant", "wx": 0.0, "wy": 0.0},
        box=[-2.0, 2.0, -2.0, 2.0],
        horizon=3.0,
        exclusions=[{"kind": "disk", "center": [0.0, 0.0], "radius": 0.1}],
    ),
}


def builtin_names() -> List[str]:
    return sorted(BUILTINS)


def get_builtin(name: str) -> ScenarioConfig:
    """
    Built-in scenario by name

    Raises:
        KeyError: unknown name
    """
    if name not in BUILTINS:
        raise KeyError(f"Unknown built-in scenario {name!r}; choose from {', '.join(builtin_names())}")
    return BUILTINS[name]()
