"""
SVG output for masks and curves

Contours are extracted by marching squares on the cell-centre lattice of a
boolean mask padded with one empty ring, so every boundary component closes
into exactly one path. Saddle squares keep diagonal foreground corners apart.
Vertex order is deterministic: each loop starts at its smallest lattice edge.
"""

import logging
from typing import Dict, List, Sequence, Tuple

import numpy as np
from jinja2 import Environment

from app.geometry.wind_field import BaseDomain

logger = logging.getLogger("output.svg")

EdgeKey = Tuple[str, int, int]

SVG_TEMPLATE = """<?xml version="1.0" encoding="UTF-8" standalone="no"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{{ view_box }}" width="{{ width }}" height="{{ height }}">
{%- if comment %}
  <!-- {{ comment }} -->
{%- endif %}
{%- for d in paths %}
  <path d="{{ d }}" fill="none" stroke="{{ stroke }}" stroke-width="{{ stroke_width }}"/>
{%- endfor %}
</svg>
"""

_template = Environment(autoescape=True, keep_trailing_newline=True).from_string(SVG_TEMPLATE)

# corner bits: 1 = (r, c), 2 = (r, c+1), 4 = (r+1, c+1), 8 = (r+1, c)
# edges: 0 bottom, 1 right, 2 top, 3 left
_SEGMENTS: Dict[int, List[Tuple[int, int]]] = {
    1: [(3, 0)],
    2: [(0, 1)],
    3: [(3, 1)],
    4: [(1, 2)],
    5: [(3, 0), (1, 2)],
    6: [(0, 2)],
    7: [(3, 2)],
    8: [(2, 3)],
    9: [(0, 2)],
    10: [(0, 1), (2, 3)],
    11: [(1, 2)],
    12: [(1, 3)],
    13: [(0, 1)],
    14: [(0, 3)],
}


def _edge(r: int, c: int, side: int) -> EdgeKey:
    if side == 0:
        return ("h", r, c)
    if side == 1:
        return ("v", r, c + 1)
    if side == 2:
        return ("h", r + 1, c)
    return ("v", r, c)


def contour_loops(mask: np.ndarray) -> List[List[EdgeKey]]:
    """
    Closed boundary loops of a boolean grid

    Args:
        mask: Boolean array indexed [row, col]

    Returns:
        List of loops, each a list of lattice edges in padded coordinates
    """
    padded = np.pad(np.asarray(mask, dtype=bool), 1).astype(np.int8)
    cases = padded[:-1, :-1] + 2 * padded[:-1, 1:] + 4 * padded[1:, 1:] + 8 * padded[1:, :-1]
    neighbours: Dict[EdgeKey, List[EdgeKey]] = {}
    for r, c in zip(*np.nonzero((cases > 0) & (cases < 15))):
        for a, b in _SEGMENTS[int(cases[r, c])]:
            ea, eb = _edge(int(r), int(c), a), _edge(int(r), int(c), b)
            neighbours.setdefault(ea, []).append(eb)
            neighbours.setdefault(eb, []).append(ea)

    loops = []
    visited = set()
    for start in sorted(neighbours):
        if start in visited:
            continue
        loop = [start]
        visited.add(start)
        previous, current = start, min(neighbours[start])
        while current != start:
            loop.append(current)
            visited.add(current)
            following = [e for e in neighbours[current] if e != previous]
            previous, current = current, (following[0] if following else start)
        loops.append(loop)
    return loops


def _edge_point(key: EdgeKey, domain: BaseDomain) -> Tuple[float, float]:
    kind, r, c = key
    row = r - 1.0 + (0.5 if kind == "v" else 0.0)
    col = c - 1.0 + (0.5 if kind == "h" else 0.0)
    xmin, _, ymin, _ = domain.box
    return xmin + (col + 0.5) * domain.dx, ymin + (row + 0.5) * domain.dy


def _flip(domain: BaseDomain, x: float, y: float) -> Tuple[float, float]:
    _, _, ymin, ymax = domain.box
    return x, ymin + ymax - y


def _path_data(points: Sequence[Tuple[float, float]], closed: bool) -> str:
    head, *rest = points
    parts = [f"M {head[0]:.6f} {head[1]:.6f}"] + [f"L {x:.6f} {y:.6f}" for x, y in rest]
    if closed:
        parts.append("Z")
    return " ".join(parts)


def _render(domain: BaseDomain, paths: List[str], comment: str = "", stroke: str = "black") -> str:
    xmin, xmax, ymin, ymax = domain.box
    width, height = xmax - xmin, ymax - ymin
    return _template.render(
        view_box=f"{xmin:.6f} {ymin:.6f} {width:.6f} {height:.6f}",
        width=f"{width:.6f}",
        height=f"{height:.6f}",
        paths=paths,
        comment=comment,
        stroke=stroke,
        stroke_width=f"{domain.cell:.6f}",
    )


def emit_svg_contour(mask: np.ndarray, domain: BaseDomain) -> str:
    """
    SVG 1.1 document with one closed path per boundary component of mask

    Args:
        mask: Boolean grid on the domain's cell centres
        domain: Geometry of the grid

    Returns:
        str: SVG text, viewBox equal to the domain box (y flipped to point up)
    """
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != (domain.ny, domain.nx):
        raise ValueError(f"Mask shape {mask.shape} does not match grid {(domain.ny, domain.nx)}")
    if not mask.any():
        logger.warning("Empty mask, writing SVG without contours")
        return _render(domain, [], comment="empty mask")
    paths = []
    for loop in contour_loops(mask):
        points = [_flip(domain, *_edge_point(key, domain)) for key in loop]
        paths.append(_path_data(points, closed=True))
    logger.info(f"Contoured mask into {len(paths)} path(s)")
    return _render(domain, paths)


def emit_svg_polyline(points: np.ndarray, domain: BaseDomain) -> str:
    """SVG document with one open path through the given (x, y) samples"""
    points = np.asarray(points, dtype=float)
    if len(points) == 0:
        return _render(domain, [], comment="empty curve")
    flipped = [_flip(domain, float(x), float(y)) for x, y in points]
    return _render(domain, [_path_data(flipped, closed=False)], stroke="blue")
