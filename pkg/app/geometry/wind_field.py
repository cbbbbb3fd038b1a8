"""
Wind Finslerian structures over a planar domain

A WindStructure pairs a base-norm field F0 with a wind field W on a boxed
domain with optional excluded regions. At each point the indicatrix is the
translated unit ball W + {F0 = 1}; this module classifies points into mild,
critical and strong wind, evaluates the induced metrics F (lower sheet) and
F_l (upper sheet) and exposes the velocity body B = W + {F0 <= 1} through its
support function, which drives reachability.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, Optional, Protocol, Sequence, Tuple, Union

import numpy as np

from app.errors import OutOfDomainError
from app.geometry.norm_kernel import (
    GeneralNorm,
    MinkowskiNorm,
    RiemannianNorm,
    Sheet,
    ZermeloSheet,
    conic_domain,
    dual_norm_batch,
    ellipse_sheet_roots,
    eval_norm_batch,
    general_sheet_roots,
    region_of,
    unit_ball_ellipse,
)

LIGHTLIKE_RTOL = 1e-8
SUPPORT_TABLE_SIZE = 4096


class ScalarField(Protocol):
    def evaluate(self, x: np.ndarray, y: np.ndarray) -> np.ndarray: ...


def _field_values(value: Union[float, ScalarField], x: np.ndarray, y: np.ndarray) -> np.ndarray:
    if hasattr(value, "evaluate"):
        return np.broadcast_to(np.asarray(value.evaluate(x, y), dtype=float), np.shape(x)).copy()
    return np.full(np.shape(x), float(value))


# ---------------------------------------------------------------------------
# Domain
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Disk:
    center: Tuple[float, float]
    radius: float

    def signed_distance(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.hypot(x - self.center[0], y - self.center[1]) - self.radius

    def bounds(self) -> Tuple[float, float, float, float]:
        cx, cy = self.center
        return cx - self.radius, cx + self.radius, cy - self.radius, cy + self.radius


@dataclass(frozen=True)
class Rect:
    xmin: float
    xmax: float
    ymin: float
    ymax: float

    @property
    def center(self) -> Tuple[float, float]:
        return 0.5 * (self.xmin + self.xmax), 0.5 * (self.ymin + self.ymax)

    def signed_distance(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        cx, cy = self.center
        hx, hy = 0.5 * (self.xmax - self.xmin), 0.5 * (self.ymax - self.ymin)
        qx = np.abs(x - cx) - hx
        qy = np.abs(y - cy) - hy
        outside = np.hypot(np.maximum(qx, 0.0), np.maximum(qy, 0.0))
        inside = np.minimum(np.maximum(qx, qy), 0.0)
        return outside + inside

    def bounds(self) -> Tuple[float, float, float, float]:
        return self.xmin, self.xmax, self.ymin, self.ymax


Exclusion = Union[Disk, Rect]


@dataclass(frozen=True)
class BaseDomain:
    """
    Bounding box [x0, x1] x [y0, y1] sampled at cell centres

    Grids are indexed [row, column] = [y, x]; ``nx`` counts columns.
    """

    box: Tuple[float, float, float, float]
    nx: int
    ny: int
    exclusions: Tuple[Exclusion, ...] = field(default_factory=tuple)

    def __post_init__(self):
        x0, x1, y0, y1 = self.box
        if not (x1 > x0 and y1 > y0):
            raise ValueError("Domain box must have positive extent")
        if self.nx < 16 or self.ny < 16:
            raise ValueError("Grid resolution must be at least 16x16")
        object.__setattr__(self, "exclusions", tuple(self.exclusions))
        for region in self.exclusions:
            ex0, ex1, ey0, ey1 = region.bounds()
            if not (x0 < ex0 and ex1 < x1 and y0 < ey0 and ey1 < y1):
                raise ValueError("Excluded regions must lie strictly inside the box")

    @property
    def dx(self) -> float:
        return (self.box[1] - self.box[0]) / self.nx

    @property
    def dy(self) -> float:
        return (self.box[3] - self.box[2]) / self.ny

    @property
    def cell(self) -> float:
        return max(self.dx, self.dy)

    @property
    def diameter(self) -> float:
        return math.hypot(self.box[1] - self.box[0], self.box[3] - self.box[2])

    @cached_property
    def xs(self) -> np.ndarray:
        return self.box[0] + (np.arange(self.nx) + 0.5) * self.dx

    @cached_property
    def ys(self) -> np.ndarray:
        return self.box[2] + (np.arange(self.ny) + 0.5) * self.dy

    @cached_property
    def mesh(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.xs, self.ys)

    @cached_property
    def obstacle_distance(self) -> np.ndarray:
        """Signed distance to the nearest excluded region (+inf without exclusions)"""
        x, y = self.mesh
        distance = np.full(x.shape, math.inf)
        for region in self.exclusions:
            distance = np.minimum(distance, region.signed_distance(x, y))
        return distance

    @cached_property
    def excluded_mask(self) -> np.ndarray:
        return self.obstacle_distance <= 0

    def in_box(self, p) -> bool:
        x, y = float(p[0]), float(p[1])
        return self.box[0] <= x <= self.box[1] and self.box[2] <= y <= self.box[3]

    def distance_to_exclusions(self, p) -> float:
        x, y = np.array([float(p[0])]), np.array([float(p[1])])
        if not self.exclusions:
            return math.inf
        return float(min(region.signed_distance(x, y)[0] for region in self.exclusions))

    def distance_to_box(self, p) -> float:
        x, y = float(p[0]), float(p[1])
        return min(x - self.box[0], self.box[1] - x, y - self.box[2], self.box[3] - y)

    def is_excluded(self, p) -> bool:
        return self.distance_to_exclusions(p) <= 0

    def contains(self, p) -> bool:
        return self.in_box(p) and not self.is_excluded(p)

    def index_of(self, p) -> Tuple[int, int]:
        """(row, column) of the cell containing p, clipped to the grid"""
        col = int(math.floor((float(p[0]) - self.box[0]) / self.dx))
        row = int(math.floor((float(p[1]) - self.box[2]) / self.dy))
        return min(max(row, 0), self.ny - 1), min(max(col, 0), self.nx - 1)

    def center_of(self, row: int, col: int) -> np.ndarray:
        return np.array([self.xs[col], self.ys[row]])

    def with_resolution(self, nx: int, ny: int) -> "BaseDomain":
        return BaseDomain(self.box, nx, ny, self.exclusions)


# ---------------------------------------------------------------------------
# Wind fields
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConstantWind:
    wx: float
    wy: float
    kind = "constant"
    is_constant = True

    def evaluate(self, x: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        shape = np.shape(x)
        return np.full(shape, float(self.wx)), np.full(shape, float(self.wy))


@dataclass(frozen=True)
class RigidRotationWind:
    """W = omega (-y, x)"""

    omega: float = 1.0
    kind = "rigid_rotation"
    is_constant = False

    def evaluate(self, x: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        return -self.omega * np.asarray(y, dtype=float), self.omega * np.asarray(x, dtype=float)


@dataclass(frozen=True)
class RadialWind:
    """W = k (x, y)"""

    k: float = 1.0
    kind = "radial"
    is_constant = False

    def evaluate(self, x: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        return self.k * np.asarray(x, dtype=float), self.k * np.asarray(y, dtype=float)


@dataclass(frozen=True)
class ExpressionWind:
    wx: ScalarField
    wy: ScalarField
    kind = "expression"
    is_constant = False

    def evaluate(self, x: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        return _field_values(self.wx, x, y), _field_values(self.wy, x, y)


WindField = Union[ConstantWind, RigidRotationWind, RadialWind, ExpressionWind]


# ---------------------------------------------------------------------------
# Base-norm fields
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ConstantNormField:
    """The same Minkowski norm at every point"""

    norm: MinkowskiNorm
    is_constant = True

    def norm_at(self, p) -> MinkowskiNorm:
        return self.norm

    def ellipse_rows(self, points: np.ndarray) -> Optional[Tuple[np.ndarray, np.ndarray]]:
        ellipse = unit_ball_ellipse(self.norm)
        if ellipse is None:
            return None
        n = len(points)
        centre, q = ellipse
        return np.broadcast_to(centre, (n, 2)).copy(), np.broadcast_to(q, (n, 2, 2)).copy()

    def evaluate_rows(self, points: np.ndarray, V: np.ndarray) -> np.ndarray:
        return eval_norm_batch(self.norm, V)

    @cached_property
    def support_table(self) -> np.ndarray:
        theta = 2.0 * math.pi * np.arange(SUPPORT_TABLE_SIZE) / SUPPORT_TABLE_SIZE
        return dual_norm_batch(self.norm, np.column_stack([np.cos(theta), np.sin(theta)]))

    def support_rows(self, points: np.ndarray, P: np.ndarray) -> np.ndarray:
        if unit_ball_ellipse(self.norm) is not None:
            return dual_norm_batch(self.norm, P)
        return _table_support(self.support_table, P)


@dataclass(frozen=True, eq=False)
class EllipseNormField:
    """
    Riemannian base norm whose unit ball is an ellipse with positionally
    varying semi-axes a(x, y), b(x, y) rotated by angle(x, y)
    """

    a: Union[float, ScalarField]
    b: Union[float, ScalarField]
    angle: Union[float, ScalarField] = 0.0
    is_constant = False

    def _axes(self, x: np.ndarray, y: np.ndarray):
        a = _field_values(self.a, x, y)
        b = _field_values(self.b, x, y)
        if np.any(a <= 0) or np.any(b <= 0):
            raise ValueError("Ellipse semi-axes must stay positive on the domain")
        return a, b, _field_values(self.angle, x, y)

    def norm_at(self, p) -> MinkowskiNorm:
        a, b, angle = self._axes(np.array([float(p[0])]), np.array([float(p[1])]))
        return RiemannianNorm.ellipse(float(a[0]), float(b[0]), float(angle[0]))

    def _shape_rows(self, points: np.ndarray):
        a, b, angle = self._axes(points[:, 0], points[:, 1])
        c, s = np.cos(angle), np.sin(angle)
        rot = np.stack([np.stack([c, -s], axis=-1), np.stack([s, c], axis=-1)], axis=-2)
        return a, b, rot

    def ellipse_rows(self, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        a, b, rot = self._shape_rows(points)
        diag = np.zeros((len(points), 2, 2))
        diag[:, 0, 0] = 1.0 / a**2
        diag[:, 1, 1] = 1.0 / b**2
        q = rot @ diag @ np.swapaxes(rot, 1, 2)
        return np.zeros((len(points), 2)), q

    def evaluate_rows(self, points: np.ndarray, V: np.ndarray) -> np.ndarray:
        _, q = self.ellipse_rows(points)
        return np.sqrt(np.maximum(np.einsum("ni,nij,nj->n", V, q, V), 0.0))

    def support_rows(self, points: np.ndarray, P: np.ndarray) -> np.ndarray:
        a, b, rot = self._shape_rows(points)
        local = np.einsum("nji,nj->ni", rot, P)
        return np.hypot(a * local[:, 0], b * local[:, 1])


NormField = Union[ConstantNormField, EllipseNormField]


def _table_support(table: np.ndarray, P: np.ndarray) -> np.ndarray:
    """Support from a periodic table of unit-covector values, linear in angle"""
    P = np.asarray(P, dtype=float).reshape(-1, 2)
    length = np.hypot(P[:, 0], P[:, 1])
    theta = np.mod(np.arctan2(P[:, 1], P[:, 0]), 2.0 * math.pi)
    position = theta / (2.0 * math.pi) * len(table)
    lo = np.floor(position).astype(int) % len(table)
    hi = (lo + 1) % len(table)
    frac = position - np.floor(position)
    return length * ((1.0 - frac) * table[lo] + frac * table[hi])


# ---------------------------------------------------------------------------
# Wind structure
# ---------------------------------------------------------------------------

class RegionClass(str, Enum):
    MILD = "mild"
    CRITICAL = "critical"
    STRONG = "strong"


class Admissibility(str, Enum):
    INTERIOR = "interior"
    LIGHTLIKE_BOUNDARY = "lightlike_boundary"
    INADMISSIBLE = "inadmissible"


REGION_CODES = {RegionClass.MILD: 0, RegionClass.CRITICAL: 1, RegionClass.STRONG: 2}


@dataclass(frozen=True)
class RegionGrid:
    """Per-cell region codes (0 mild, 1 critical, 2 strong, -1 excluded)"""

    codes: np.ndarray
    origin_offset: np.ndarray
    critical_tolerance: float

    @property
    def counts(self) -> Dict[str, int]:
        return {
            "mild": int(np.sum(self.codes == 0)),
            "critical": int(np.sum(self.codes == 1)),
            "strong": int(np.sum(self.codes == 2)),
            "excluded": int(np.sum(self.codes == -1)),
        }

    @property
    def observed_band(self) -> Optional[Tuple[float, float]]:
        """Range of d0 actually seen in cells classified critical"""
        band = self.origin_offset[self.codes == 1]
        if band.size == 0:
            return None
        return float(band.min()), float(band.max())

    def to_dict(self) -> dict:
        band = self.observed_band
        return {
            "counts": self.counts,
            "critical_tolerance": self.critical_tolerance,
            "observed_band": list(band) if band else None,
        }


@dataclass(frozen=True, eq=False)
class WindStructure:
    """
    Base-norm field F0 and wind W over a domain

    Args:
        domain: Bounding box, grid and exclusions
        norm_field: F0 at each point
        wind: W at each point
        critical_tolerance: Half-width of the critical band on d0 = F0(-W) - 1
    """

    domain: BaseDomain
    norm_field: NormField
    wind: WindField
    critical_tolerance: float = 1e-6

    # -- pointwise data ----------------------------------------------------

    def wind_at(self, p) -> np.ndarray:
        wx, wy = self.wind.evaluate(np.array([float(p[0])]), np.array([float(p[1])]))
        return np.array([float(wx[0]), float(wy[0])])

    def wind_rows(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float).reshape(-1, 2)
        wx, wy = self.wind.evaluate(points[:, 0], points[:, 1])
        return np.column_stack([wx, wy])

    def norm_at(self, p) -> MinkowskiNorm:
        return self.norm_field.norm_at(p)

    def sheet_at(self, p, sheet: Sheet = Sheet.LOWER) -> ZermeloSheet:
        return ZermeloSheet(self.norm_at(p), self.wind_at(p), sheet, self.critical_tolerance)

    def origin_offset_rows(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float).reshape(-1, 2)
        return self.norm_field.evaluate_rows(points, -self.wind_rows(points)) - 1.0

    def origin_offset(self, p) -> float:
        return float(self.origin_offset_rows(np.asarray(p, dtype=float)[None, :])[0])

    def _require_point(self, p) -> None:
        if not self.domain.contains(p):
            raise OutOfDomainError(f"Point {tuple(float(c) for c in p)} is outside the domain or excluded")

    def classify_point(self, p) -> RegionClass:
        """Mild, critical or strong by the d0 band rule"""
        self._require_point(p)
        return RegionClass(region_of(self.origin_offset(p), self.critical_tolerance))

    # -- metrics -----------------------------------------------------------

    def sheet_roots(self, points: np.ndarray, V: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """
        Row-wise (F, F_l) with the zero-vector convention applied

        Zero vectors give 1 at critical points and (0, +inf) at mild points.
        """
        points = np.asarray(points, dtype=float).reshape(-1, 2)
        V = np.asarray(V, dtype=float).reshape(-1, 2)
        d0 = self.origin_offset_rows(points)
        winds = self.wind_rows(points)
        ellipse = self.norm_field.ellipse_rows(points)
        if ellipse is not None:
            lower, upper = ellipse_sheet_roots(ellipse[0], ellipse[1], winds, V, d0, self.critical_tolerance)
        else:
            lower = np.empty(len(V))
            upper = np.empty(len(V))
            labels = region_of(d0, self.critical_tolerance)
            for i in range(len(V)):
                if np.any(V[i]):
                    lower[i], upper[i] = general_sheet_roots(
                        self.norm_field.norm_at(points[i]), winds[i], V[i], str(labels[i])
                    )

        zero = ~np.any(V, axis=1)
        mild = d0 < -self.critical_tolerance
        strong = d0 > self.critical_tolerance
        critical = ~mild & ~strong
        lower[zero & mild] = 0.0
        upper[zero & mild] = math.inf
        lower[zero & critical] = 1.0
        upper[zero & critical] = 1.0
        lower[zero & strong] = math.inf
        upper[zero & strong] = math.inf
        return lower, upper

    def eval_F(self, p, v) -> float:
        lower, _ = self.sheet_roots(np.asarray(p, dtype=float)[None, :], np.asarray(v, dtype=float)[None, :])
        return float(lower[0])

    def eval_Fl(self, p, v) -> float:
        _, upper = self.sheet_roots(np.asarray(p, dtype=float)[None, :], np.asarray(v, dtype=float)[None, :])
        return float(upper[0])

    def admissible(self, p, v) -> Admissibility:
        """Classify v against the open ball B_p seen from the origin"""
        lower, upper = self.sheet_roots(np.asarray(p, dtype=float)[None, :], np.asarray(v, dtype=float)[None, :])
        f, fl = float(lower[0]), float(upper[0])
        if not math.isfinite(f):
            return Admissibility.INADMISSIBLE
        if math.isfinite(fl) and abs(fl - f) <= LIGHTLIKE_RTOL * fl:
            return Admissibility.LIGHTLIKE_BOUNDARY
        return Admissibility.INTERIOR

    def admissibility_margin(self, p, v) -> float:
        """
        Distance of v from the velocity-cone boundary, in [0, 1]

        1 in the mild region; the relative root gap (F_l - F)/(F_l + F) in
        strong wind; the cosine margin to the half-plane edge at critical
        points; -1 when v is inadmissible.
        """
        p = np.asarray(p, dtype=float)
        v = np.asarray(v, dtype=float)
        d0 = self.origin_offset(p)
        if d0 < -self.critical_tolerance:
            return 1.0
        f, fl = self.eval_F(p, v), self.eval_Fl(p, v)
        if not math.isfinite(f):
            return -1.0
        if d0 > self.critical_tolerance:
            return (fl - f) / (fl + f)
        axis = conic_domain(self.sheet_at(p)).axis
        return float(axis @ v / np.linalg.norm(v))

    # -- velocity body -----------------------------------------------------

    def velocity_body_support(self, p, q) -> float:
        """max over v in B_p of q(v) = q(W) + F0*(q)"""
        return float(self.velocity_body_support_rows(np.asarray(p, dtype=float)[None, :], np.asarray(q, dtype=float)[None, :])[0])

    def velocity_body_support_rows(self, points: np.ndarray, Q: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float).reshape(-1, 2)
        Q = np.asarray(Q, dtype=float).reshape(-1, 2)
        winds = self.wind_rows(points)
        return np.einsum("ni,ni->n", Q, winds) + self.norm_field.support_rows(points, Q)

    @cached_property
    def grid_points(self) -> np.ndarray:
        x, y = self.domain.mesh
        return np.column_stack([x.ravel(), y.ravel()])

    def velocity_body_support_grid(self, qx: np.ndarray, qy: np.ndarray) -> np.ndarray:
        """Support function at every cell centre for per-cell covectors"""
        return self.grid_support(np.asarray(qx, dtype=float), np.asarray(qy, dtype=float))

    @cached_property
    def speed_bounds(self) -> Tuple[np.ndarray, np.ndarray]:
        """Per-cell bounds on |v_x| and |v_y| over the velocity body"""
        pts = self.grid_points
        shape = (self.domain.ny, self.domain.nx)
        n = len(pts)
        bounds = []
        for axis in (np.array([1.0, 0.0]), np.array([0.0, 1.0])):
            plus = self.velocity_body_support_rows(pts, np.broadcast_to(axis, (n, 2)))
            minus = self.velocity_body_support_rows(pts, np.broadcast_to(-axis, (n, 2)))
            bounds.append(np.maximum(np.abs(plus), np.abs(minus)).reshape(shape))
        return bounds[0], bounds[1]

    @cached_property
    def max_speed(self) -> float:
        """Largest |v| over all velocity bodies on the grid (64 support directions)"""
        pts = self.grid_points
        theta = 2.0 * math.pi * np.arange(64) / 64
        best = 0.0
        for t in theta:
            q = np.broadcast_to(np.array([math.cos(t), math.sin(t)]), (len(pts), 2))
            best = max(best, float(np.max(self.velocity_body_support_rows(pts, q))))
        # a 64-gon of support lines circumscribes the body within 1/cos(pi/64)
        return best / math.cos(math.pi / 64)

    # -- grid summaries ----------------------------------------------------

    @cached_property
    def region_grid(self) -> RegionGrid:
        shape = (self.domain.ny, self.domain.nx)
        d0 = self.origin_offset_rows(self.grid_points).reshape(shape)
        codes = np.where(
            d0 < -self.critical_tolerance, 0, np.where(d0 > self.critical_tolerance, 2, 1)
        )
        codes = np.where(self.domain.excluded_mask, -1, codes)
        return RegionGrid(codes=codes, origin_offset=d0, critical_tolerance=self.critical_tolerance)

    @property
    def killing_character(self) -> str:
        """timelike when all cells are mild, causal when none is strong, else arbitrary"""
        counts = self.region_grid.counts
        if counts["critical"] == 0 and counts["strong"] == 0:
            return "timelike"
        if counts["strong"] == 0:
            return "causal"
        return "arbitrary"

    @property
    def is_constant(self) -> bool:
        return bool(self.wind.is_constant and self.norm_field.is_constant)

    @cached_property
    def grid_support(self) -> "GridSupport":
        return GridSupport(self)

    @property
    def all_mild(self) -> bool:
        return self.killing_character == "timelike"


def classify_grid(ws: WindStructure) -> RegionGrid:
    return ws.region_grid


def build_wind_structure(
    box: Sequence[float],
    resolution: Tuple[int, int],
    wind: WindField,
    norm: Optional[Union[MinkowskiNorm, NormField]] = None,
    exclusions: Sequence[Exclusion] = (),
    critical_tolerance: float = 1e-6,
) -> WindStructure:
    """Convenience constructor used by scenarios and tests"""
    domain = BaseDomain(tuple(float(c) for c in box), int(resolution[0]), int(resolution[1]), tuple(exclusions))
    if norm is None:
        field_ = ConstantNormField(RiemannianNorm.euclidean())
    elif isinstance(norm, (RiemannianNorm, GeneralNorm)) or not hasattr(norm, "support_rows"):
        field_ = ConstantNormField(norm)
    else:
        field_ = norm
    return WindStructure(domain, field_, wind, critical_tolerance)


class GridSupport:
    """
    Support function of the velocity bodies at every cell centre

    Per-cell wind and unit-ball data are precomputed once so the level-set
    stepping only does array arithmetic.
    """

    def __init__(self, ws: WindStructure):
        pts = ws.grid_points
        shape = (ws.domain.ny, ws.domain.nx)
        self.shape = shape
        winds = ws.wind_rows(pts)
        ellipse = ws.norm_field.ellipse_rows(pts)
        if ellipse is not None:
            centre, q = ellipse
            q_inv = np.linalg.inv(q)
            shift = winds + centre
            self._sx = shift[:, 0].reshape(shape)
            self._sy = shift[:, 1].reshape(shape)
            self._qxx = q_inv[:, 0, 0].reshape(shape)
            self._qxy = q_inv[:, 0, 1].reshape(shape)
            self._qyy = q_inv[:, 1, 1].reshape(shape)
            self._table = None
        else:
            self._sx = winds[:, 0].reshape(shape)
            self._sy = winds[:, 1].reshape(shape)
            self._table = ws.norm_field.support_table

    def __call__(self, qx: np.ndarray, qy: np.ndarray, index=Ellipsis) -> np.ndarray:
        """S at the cells selected by index (all cells by default)"""
        linear = qx * self._sx[index] + qy * self._sy[index]
        if self._table is None:
            quad = self._qxx[index] * qx * qx + 2.0 * self._qxy[index] * qx * qy + self._qyy[index] * qy * qy
            return linear + np.sqrt(np.maximum(quad, 0.0))
        dual = _table_support(self._table, np.column_stack([np.ravel(qx), np.ravel(qy)]))
        return linear + dual.reshape(np.shape(qx))

    def optimal_velocity(self, nx_: np.ndarray, ny_: np.ndarray, index=Ellipsis, step: float = 1e-6) -> Tuple[np.ndarray, np.ndarray]:
        """Gradient of the support function: the body point maximising <n, v>"""
        vx = (self(nx_ + step, ny_, index) - self(nx_ - step, ny_, index)) / (2.0 * step)
        vy = (self(nx_, ny_ + step, index) - self(nx_, ny_ - step, index)) / (2.0 * step)
        return vx, vy
