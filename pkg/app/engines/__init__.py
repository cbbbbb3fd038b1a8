"""
Wind Causality Studio - Engines Package

This package contains the numerical engines:
- ReachabilityEngine: exact-time fronts, separation, fast sweeping, sampling
- GeodesicEngine: Euler-Lagrange integration and two-point shooting
- CausalEngine: cone membership and causal relations of the CSTK spacetime
- LadderClassifier: position on the upper causal ladder
"""

from .base_engine import BaseEngine
from .causal_engine import CausalEngine, CSTKScenario, SpacetimeEvent, get_causal_engine
from .geodesic_engine import GeodesicEngine, GeodesicPath, MetricTag, get_geodesic_engine
from .ladder_classifier import LadderClassifier, LadderReport, get_ladder_classifier
from .reachability_engine import Direction, ReachabilityEngine, ReachabilityFamily, get_reachability_engine

__all__ = [
    "BaseEngine",
    "CSTKScenario",
    "CausalEngine",
    "Direction",
    "GeodesicEngine",
    "GeodesicPath",
    "LadderClassifier",
    "LadderReport",
    "MetricTag",
    "ReachabilityEngine",
    "ReachabilityFamily",
    "SpacetimeEvent",
    "get_causal_engine",
    "get_geodesic_engine",
    "get_ladder_classifier",
    "get_reachability_engine",
]
