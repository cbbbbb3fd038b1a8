"""
Scenario package for Wind Causality Studio

This package contains scenario plumbing:
- FieldExpr: whitelisted scalar expressions in x and y
- ScenarioConfig: validated TOML scenario files
- Built-in scenarios with closed-form reference behaviour
"""

from .builtins import builtin_names, get_builtin
from .expressions import FieldExpr
from .scenario_config import (
    ScenarioConfig,
    build_scenario,
    build_wind_structure_from_config,
    load_config,
    parse_config,
    serialize_config,
)

__all__ = [
    "FieldExpr",
    "ScenarioConfig",
    "build_scenario",
    "build_wind_structure_from_config",
    "builtin_names",
    "get_builtin",
    "load_config",
    "parse_config",
    "serialize_config",
]
