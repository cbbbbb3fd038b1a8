"""
Output package for Wind Causality Studio

This package writes command artifacts:
- PGM masks and region maps
- CSV grids and geodesic samples
- Canonical JSON reports
- SVG contours (marching squares) and polylines
"""

from .svg import contour_loops, emit_svg_contour, emit_svg_polyline
from .writers import (
    dumps_json,
    grid_frame,
    jsonable,
    mask_image,
    pgm_bytes,
    region_image,
    write_csv,
    write_json,
    write_pgm,
)

__all__ = [
    "contour_loops",
    "dumps_json",
    "emit_svg_contour",
    "emit_svg_polyline",
    "grid_frame",
    "jsonable",
    "mask_image",
    "pgm_bytes",
    "region_image",
    "write_csv",
    "write_json",
    "write_pgm",
]
