"""
Wind Causality Studio - Main Application Package

This package contains the core components of the Wind Causality Studio:
- Geometry: Minkowski norms, Zermelo sheets and wind structures
- Engines: Geodesics, reachability fronts, causal queries and the causal ladder
- Scenario: Scenario files, field expressions and built-in scenarios
- Tasks: One task per command, shared by the CLI and the API
- Output: PGM, CSV, JSON and SVG artifact writers
- API: FastAPI endpoints and routing
"""

__version__ = "1.0.0"
__author__ = "Wind Causality Studio Team"

from . import config
