"""
Pointwise pseudo-Minkowski norm algebra

This module provides the norm kinds used by wind structures:
- RiemannianNorm: sqrt(h(v, v))
- RandersNorm: sqrt(h(v, v)) + omega(v)
- GeneralNorm: any vectorised, positively homogeneous, strongly convex norm
- KropinaNorm: F0(v)^2 / beta(v) on the half plane beta > 0
- ZermeloSheet: a root of F0(v - lambda W) = lambda (lower or upper sheet)

plus conic domains, fundamental tensors, signature classification,
indicatrix sampling and strong-convexity checks. Everything here is a pure
function of frozen inputs.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, List, Optional, Tuple, Union

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from app.errors import (
    BoundaryProximityError,
    ConfigurationError,
    EmptyIndicatrixError,
    NumericalFailureError,
)

ROOT_RTOL = 1e-12
ROOT_MAXITER = 200
DISCRIMINANT_SNAP = 1e-14
SUPPORT_SAMPLES = 256


def _as_vector(v) -> np.ndarray:
    return np.asarray(v, dtype=float).reshape(2)


def _as_matrix(h) -> np.ndarray:
    m = np.asarray(h, dtype=float).reshape(2, 2)
    return 0.5 * (m + m.T)


def _rot90(v: np.ndarray) -> np.ndarray:
    return np.array([-v[1], v[0]])


@dataclass(frozen=True, eq=False)
class RiemannianNorm:
    """Euclidean-type norm sqrt(h(v, v)) with h symmetric positive definite"""

    h: np.ndarray

    def __post_init__(self):
        h = _as_matrix(self.h)
        if np.min(np.linalg.eigvalsh(h)) <= 0:
            raise ValueError("Riemannian h must be positive definite")
        object.__setattr__(self, "h", h)

    @classmethod
    def euclidean(cls) -> "RiemannianNorm":
        return cls(np.eye(2))

    @classmethod
    def ellipse(cls, a: float, b: float, angle: float = 0.0) -> "RiemannianNorm":
        """Norm whose unit ball is the ellipse with semi-axes a, b rotated by angle"""
        if a <= 0 or b <= 0:
            raise ValueError("Ellipse semi-axes must be positive")
        c, s = math.cos(angle), math.sin(angle)
        rot = np.array([[c, -s], [s, c]])
        return cls(rot @ np.diag([1.0 / a**2, 1.0 / b**2]) @ rot.T)


@dataclass(frozen=True, eq=False)
class RandersNorm:
    """Randers norm sqrt(h(v, v)) + omega(v), requires |omega|_h* < 1"""

    h: np.ndarray
    omega: np.ndarray

    def __post_init__(self):
        h = _as_matrix(self.h)
        omega = _as_vector(self.omega)
        if np.min(np.linalg.eigvalsh(h)) <= 0:
            raise ValueError("Randers h must be positive definite")
        if math.sqrt(omega @ np.linalg.solve(h, omega)) >= 1.0:
            raise ValueError("Randers omega must have h-dual norm < 1")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "omega", omega)


@dataclass(frozen=True, eq=False)
class GeneralNorm:
    """
    User-supplied Minkowski norm

    ``func`` maps an (n, 2) array of vectors to an (n,) array of values and must
    be positively 1-homogeneous, positive off the origin and strongly convex.
    """

    func: Callable[[np.ndarray], np.ndarray]
    name: str = "general"


MinkowskiNorm = Union[RiemannianNorm, RandersNorm, GeneralNorm]


@dataclass(frozen=True, eq=False)
class KropinaNorm:
    """Kropina norm F0(v)^2 / beta(v), finite on the half plane beta(v) > 0"""

    base: MinkowskiNorm
    beta: np.ndarray

    def __post_init__(self):
        beta = _as_vector(self.beta)
        if not np.any(beta):
            raise ValueError("Kropina beta must be nonzero")
        object.__setattr__(self, "beta", beta)


class Sheet(str, Enum):
    LOWER = "lower"
    UPPER = "upper"


@dataclass(frozen=True, eq=False)
class ZermeloSheet:
    """
    Sheet of the wind norm induced by base norm F0 and wind W

    The lower sheet is the smallest positive root of F0(v - lambda W) = lambda
    (conic Finsler metric F), the upper sheet the largest (Lorentz-Finsler F_l).
    """

    base: MinkowskiNorm
    wind: np.ndarray
    sheet: Sheet = Sheet.LOWER
    critical_tolerance: float = 1e-6

    def __post_init__(self):
        object.__setattr__(self, "wind", _as_vector(self.wind))
        object.__setattr__(self, "sheet", Sheet(self.sheet))

    @property
    def origin_offset(self) -> float:
        """d0 = F0(-W) - 1; negative when the origin lies inside the translated ball"""
        return float(eval_norm_batch(self.base, -self.wind[None, :])[0]) - 1.0

    @property
    def region(self) -> str:
        d0 = self.origin_offset
        if d0 < -self.critical_tolerance:
            return "mild"
        if d0 > self.critical_tolerance:
            return "strong"
        return "critical"


NormSpec = Union[RiemannianNorm, RandersNorm, GeneralNorm, KropinaNorm, ZermeloSheet]


class ConicKind(str, Enum):
    FULL = "full"
    HALF_PLANE = "half_plane"
    CONE = "cone"


@dataclass(frozen=True, eq=False)
class ConicDomain:
    """
    Open conic domain of a norm

    Cones are stored by their two boundary rays ordered counter-clockwise;
    ``axis`` and ``half_angle`` are derived from them.
    """

    kind: ConicKind
    beta: Optional[np.ndarray] = None
    rays: Optional[Tuple[np.ndarray, np.ndarray]] = None

    @property
    def axis(self) -> Optional[np.ndarray]:
        if self.kind == ConicKind.HALF_PLANE:
            return self.beta / np.linalg.norm(self.beta)
        if self.kind == ConicKind.CONE:
            bisector = self.rays[0] + self.rays[1]
            return bisector / np.linalg.norm(bisector)
        return None

    @property
    def half_angle(self) -> float:
        if self.kind == ConicKind.FULL:
            return math.pi
        if self.kind == ConicKind.HALF_PLANE:
            return math.pi / 2
        return 0.5 * math.acos(float(np.clip(self.rays[0] @ self.rays[1], -1.0, 1.0)))

    def boundary_distance(self, v) -> float:
        """Angular distance from v to the domain boundary, negative outside"""
        v = _as_vector(v)
        norm = np.linalg.norm(v)
        if norm == 0:
            return -math.inf if self.kind != ConicKind.FULL else 0.0
        if self.kind == ConicKind.FULL:
            return math.pi
        cos_angle = float(np.clip(self.axis @ v / norm, -1.0, 1.0))
        return self.half_angle - math.acos(cos_angle)

    def contains(self, v) -> bool:
        v = _as_vector(v)
        if self.kind == ConicKind.FULL:
            return bool(np.any(v))
        if self.kind == ConicKind.HALF_PLANE:
            return bool(self.beta @ v > 0)
        first, second = self.rays
        return bool(_cross(first, v) > 0 and _cross(v, second) > 0)

    def angles(self, count: int) -> np.ndarray:
        """Parameter-ordered direction angles covering the open domain"""
        if self.kind == ConicKind.FULL:
            return 2.0 * math.pi * np.arange(count) / count
        if self.kind == ConicKind.HALF_PLANE:
            start = math.atan2(self.beta[1], self.beta[0]) - math.pi / 2
            return start + math.pi * (np.arange(count) + 0.5) / count
        first, second = self.rays
        start = math.atan2(first[1], first[0])
        width = math.atan2(_cross(first, second), float(first @ second))
        return start + width * (np.arange(count) + 0.5) / count


def _cross(u: np.ndarray, v: np.ndarray) -> float:
    return float(u[0] * v[1] - u[1] * v[0])


@dataclass(frozen=True, eq=False)
class FundamentalTensor:
    """g_v = 1/2 Hess(F^2) at v, stored symmetric"""

    vector: np.ndarray
    matrix: np.ndarray

    def __call__(self, u, w) -> float:
        return float(_as_vector(u) @ self.matrix @ _as_vector(w))

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)


class Signature(str, Enum):
    POSITIVE_DEFINITE = "positive_definite"
    LORENTZIAN = "lorentzian"
    NEGATIVE_DEFINITE = "negative_definite"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class ConvexityReport:
    passed: bool
    min_tangent_value: float
    min_eigenvalue: float
    samples: int
    oriented_inward: bool

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "min_tangent_value": self.min_tangent_value,
            "min_eigenvalue": self.min_eigenvalue,
            "samples": self.samples,
            "oriented_inward": self.oriented_inward,
        }


# ---------------------------------------------------------------------------
# Unit-ball geometry of Minkowski base norms
# ---------------------------------------------------------------------------

def unit_ball_ellipse(base: MinkowskiNorm) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    """
    Closed form of the unit ball of a Riemannian or Randers norm

    Returns:
        (centre, Q) such that the ball is (u - centre)^T Q (u - centre) <= 1,
        or None for a general norm
    """
    if isinstance(base, RiemannianNorm):
        return np.zeros(2), base.h
    if isinstance(base, RandersNorm):
        m = base.h - np.outer(base.omega, base.omega)
        m_inv_omega = np.linalg.solve(m, base.omega)
        centre = -m_inv_omega
        q = m / (1.0 + float(base.omega @ m_inv_omega))
        return centre, 0.5 * (q + q.T)
    return None


def dual_norm(base: MinkowskiNorm, covector) -> float:
    """Support function of the unit ball of a Minkowski norm"""
    return float(dual_norm_batch(base, np.asarray(covector, dtype=float).reshape(1, 2))[0])


def dual_norm_batch(base: MinkowskiNorm, P: np.ndarray) -> np.ndarray:
    P = np.asarray(P, dtype=float).reshape(-1, 2)
    ellipse = unit_ball_ellipse(base)
    if ellipse is not None:
        centre, q = ellipse
        q_inv = np.linalg.inv(q)
        quad = np.einsum("ij,jk,ik->i", P, q_inv, P)
        return P @ centre + np.sqrt(np.maximum(quad, 0.0))
    return np.array([_sampled_support(base, p) for p in P])


def _sampled_support(base: GeneralNorm, p: np.ndarray) -> float:
    if not np.any(p):
        return 0.0
    theta = 2.0 * math.pi * np.arange(SUPPORT_SAMPLES) / SUPPORT_SAMPLES
    dirs = np.column_stack([np.cos(theta), np.sin(theta)])
    values = dirs @ p / np.asarray(base.func(dirs), dtype=float)
    best = int(np.argmax(values))
    step = 2.0 * math.pi / SUPPORT_SAMPLES

    def negative(t: float) -> float:
        u = np.array([[math.cos(t), math.sin(t)]])
        return -float(u[0] @ p / base.func(u)[0])

    refined = minimize_scalar(
        negative,
        bounds=(theta[best] - step, theta[best] + step),
        method="bounded",
        options={"xatol": 1e-12},
    )
    return max(float(values[best]), -float(refined.fun))


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def eval_norm(spec: NormSpec, v) -> float:
    """
    Evaluate a norm at a nonzero vector

    Args:
        spec: Norm description
        v: Vector, must be nonzero

    Returns:
        float: F(v), or +inf when v lies outside the conic domain
    """
    v = _as_vector(v)
    if not np.any(v):
        raise ValueError("eval_norm requires a nonzero vector")
    return float(eval_norm_batch(spec, v[None, :])[0])


def eval_norm_batch(spec: NormSpec, V: np.ndarray) -> np.ndarray:
    """Evaluate a norm on an (n, 2) array of vectors"""
    V = np.asarray(V, dtype=float).reshape(-1, 2)
    if isinstance(spec, RiemannianNorm):
        return np.sqrt(np.maximum(np.einsum("ij,jk,ik->i", V, spec.h, V), 0.0))
    if isinstance(spec, RandersNorm):
        quad = np.einsum("ij,jk,ik->i", V, spec.h, V)
        return np.sqrt(np.maximum(quad, 0.0)) + V @ spec.omega
    if isinstance(spec, GeneralNorm):
        return np.asarray(spec.func(V), dtype=float).reshape(-1)
    if isinstance(spec, KropinaNorm):
        beta = V @ spec.beta
        base = eval_norm_batch(spec.base, V)
        out = np.full(len(V), math.inf)
        positive = beta > 0
        out[positive] = base[positive] ** 2 / beta[positive]
        return out
    if isinstance(spec, ZermeloSheet):
        lower, upper = zermelo_roots(spec.base, spec.wind, V, spec.critical_tolerance)
        return lower if spec.sheet == Sheet.LOWER else upper
    raise TypeError(f"Unsupported norm spec: {type(spec).__name__}")


def region_of(d0, critical_tolerance: float = 1e-6):
    """Region label(s) from d0 = F0(-W) - 1 with a symmetric critical band"""
    d0 = np.asarray(d0, dtype=float)
    labels = np.where(d0 < -critical_tolerance, "mild", np.where(d0 > critical_tolerance, "strong", "critical"))
    return str(labels) if labels.ndim == 0 else labels


def zermelo_roots(
    base: MinkowskiNorm,
    wind: np.ndarray,
    V: np.ndarray,
    critical_tolerance: float = 1e-6,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Both positive roots of F0(v - lambda W) = lambda for each row of V

    Returns:
        (lower, upper): +inf where a root does not exist; zero rows give (0, +inf)
    """
    V = np.asarray(V, dtype=float).reshape(-1, 2)
    wind = _as_vector(wind)
    d0 = float(eval_norm_batch(base, -wind[None, :])[0]) - 1.0
    n = len(V)

    ellipse = unit_ball_ellipse(base)
    if ellipse is not None:
        centre, q = ellipse
        lower, upper = ellipse_sheet_roots(
            np.broadcast_to(centre, (n, 2)),
            np.broadcast_to(q, (n, 2, 2)),
            np.broadcast_to(wind, (n, 2)),
            V,
            np.full(n, d0),
            critical_tolerance,
        )
    else:
        region = region_of(d0, critical_tolerance)
        lower = np.empty(n)
        upper = np.empty(n)
        for i, v in enumerate(V):
            lower[i], upper[i] = general_sheet_roots(base, wind, v, region)

    zero = ~np.any(V, axis=1)
    lower[zero] = 0.0
    upper[zero] = math.inf
    return lower, upper


def ellipse_sheet_roots(
    centre: np.ndarray,
    q: np.ndarray,
    wind: np.ndarray,
    V: np.ndarray,
    d0: np.ndarray,
    critical_tolerance: float = 1e-6,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Row-wise sheet roots when each base unit ball is an ellipse

    With W' = W + centre the roots 1/lambda solve
    mu^2 Q(v, v) - 2 mu Q(v, W') + Q(W', W') - 1 = 0.
    """
    shifted = wind + centre
    qw = np.einsum("nij,nj->ni", q, shifted)
    a = np.einsum("ni,ni->n", shifted, qw) - 1.0
    b = np.einsum("ni,ni->n", V, qw)
    c = np.einsum("ni,nij,nj->n", V, q, V)
    disc = b * b - a * c
    disc = np.where(np.abs(disc) <= DISCRIMINANT_SNAP * b * b, 0.0, disc)

    mild = d0 < -critical_tolerance
    strong = d0 > critical_tolerance
    critical = ~mild & ~strong
    lower = np.full(len(V), math.inf)
    upper = np.full(len(V), math.inf)

    with np.errstate(divide="ignore", invalid="ignore"):
        lower[mild] = c[mild] / (b[mild] + np.sqrt(np.maximum(disc[mild], 0.0)))
        ok = critical & (b > 0)
        lower[ok] = c[ok] / (2.0 * b[ok])
        ok = strong & (b > 0) & (disc >= 0)
        root = np.sqrt(disc[ok])
        lower[ok] = c[ok] / (b[ok] + root)
        upper[ok] = (b[ok] + root) / a[ok]
    return lower, upper


def general_sheet_roots(base: GeneralNorm, wind: np.ndarray, v: np.ndarray, region: str) -> Tuple[float, float]:
    """Roots via mu = 1/lambda of psi(mu) = F0(mu v - W) - 1 (convex in mu)"""
    if not np.any(v):
        return 0.0, math.inf

    def psi(mu: float) -> float:
        return float(base.func((mu * v - wind)[None, :])[0]) - 1.0

    # F0(mu v - W) >= mu F0(v) - F0(W), so psi > 0 beyond this bound
    speed = float(base.func(v[None, :])[0])
    hi = 2.0 * (1.0 + float(base.func(wind[None, :])[0])) / speed

    if region == "mild":
        return 1.0 / _brent(psi, 0.0, hi), math.inf

    best = minimize_scalar(psi, bounds=(0.0, hi), method="bounded", options={"xatol": 1e-14})
    mu_star, psi_star = float(best.x), float(best.fun)
    if psi_star >= 0.0 or mu_star <= 0.0:
        return math.inf, math.inf

    mu_large = _brent(psi, mu_star, hi)
    if region == "critical":
        return 1.0 / mu_large, math.inf
    mu_small = _brent(psi, 0.0, mu_star)
    return 1.0 / mu_large, 1.0 / mu_small


def _brent(func: Callable[[float], float], lo: float, hi: float) -> float:
    root, result = brentq(func, lo, hi, rtol=ROOT_RTOL, maxiter=ROOT_MAXITER, full_output=True, disp=False)
    if not result.converged:
        raise NumericalFailureError("Zermelo root finder did not converge", residual=abs(func(root)))
    return float(root)


# ---------------------------------------------------------------------------
# Conic domains
# ---------------------------------------------------------------------------

def conic_domain(spec: NormSpec) -> ConicDomain:
    """Open conic domain on which the norm is finite"""
    if isinstance(spec, (RiemannianNorm, RandersNorm, GeneralNorm)):
        return ConicDomain(ConicKind.FULL)
    if isinstance(spec, KropinaNorm):
        return ConicDomain(ConicKind.HALF_PLANE, beta=spec.beta)
    if isinstance(spec, ZermeloSheet):
        region = spec.region
        if region == "mild":
            return ConicDomain(ConicKind.FULL)
        ellipse = unit_ball_ellipse(spec.base)
        if region == "critical":
            if ellipse is not None:
                centre, q = ellipse
                beta = q @ (spec.wind + centre)
            else:
                beta = _general_critical_covector(spec)
            return ConicDomain(ConicKind.HALF_PLANE, beta=beta)
        return ConicDomain(ConicKind.CONE, rays=_strong_cone_rays(spec, ellipse))
    raise TypeError(f"Unsupported norm spec: {type(spec).__name__}")


def _strong_cone_rays(spec: ZermeloSheet, ellipse) -> Tuple[np.ndarray, np.ndarray]:
    if ellipse is not None:
        centre, q = ellipse
        shifted = spec.wind + centre
        a = float(shifted @ q @ shifted) - 1.0
        qw = q @ shifted
        g = np.outer(qw, qw) - a * q
        eigvals, eigvecs = np.linalg.eigh(g)
        neg, pos = eigvals[0], eigvals[1]
        rays = [_null_ray(eigvecs, neg, pos, s) for s in (1.0, -1.0)]
        rays = [r if r @ qw > 0 else -r for r in rays]
    else:
        rays = _general_cone_rays(spec)
    first, second = (r / np.linalg.norm(r) for r in rays)
    if _cross(first, second) < 0:
        first, second = second, first
    return first, second


def _null_ray(eigvecs: np.ndarray, neg: float, pos: float, sign: float) -> np.ndarray:
    # g = neg e0 e0^T + pos e1 e1^T vanishes on sqrt(pos) e0 + sign sqrt(-neg) e1
    return math.sqrt(pos) * eigvecs[:, 0] + sign * math.sqrt(-neg) * eigvecs[:, 1]


def _body_support(spec: ZermeloSheet, normal: np.ndarray) -> float:
    return float(normal @ spec.wind) + dual_norm(spec.base, normal)


def _general_cone_rays(spec: ZermeloSheet) -> List[np.ndarray]:
    """Tangent rays from the origin to W + unit ball, via zeros of its support"""
    theta = 2.0 * math.pi * np.arange(720) / 720

    def support(t: float) -> float:
        return _body_support(spec, np.array([math.cos(t), math.sin(t)]))

    values = np.array([support(t) for t in theta])
    rays = []
    for i in range(len(theta)):
        j = (i + 1) % len(theta)
        if values[i] < 0 <= values[j] or values[i] >= 0 > values[j]:
            lo, hi = theta[i], theta[i] + 2.0 * math.pi / 720
            t = _brent(support, lo, hi)
            normal = np.array([math.cos(t), math.sin(t)])
            tangent = _rot90(normal)
            if tangent @ spec.wind < 0:
                tangent = -tangent
            rays.append(tangent)
    if len(rays) != 2:
        raise NumericalFailureError(f"Expected two tangent rays, found {len(rays)}")
    return rays


def _general_critical_covector(spec: ZermeloSheet) -> np.ndarray:
    """Inward normal of the translated ball at the origin (its support vanishes there)"""
    theta = 2.0 * math.pi * np.arange(720) / 720
    values = [_body_support(spec, np.array([math.cos(t), math.sin(t)])) for t in theta]
    best = theta[int(np.argmin(values))]
    return -np.array([math.cos(best), math.sin(best)])


# ---------------------------------------------------------------------------
# Fundamental tensor and signature
# ---------------------------------------------------------------------------

def fundamental_tensor(spec: NormSpec, v, step: Optional[float] = None) -> FundamentalTensor:
    """
    Fundamental tensor g_v = 1/2 Hess(F^2)(v)

    Computed in the frame (v/|v|, n) with n orthogonal to v: the v-v entry is
    L(v)/|v|^2 exactly, the mixed entry a central first difference of L along
    n, and the n-n entry a Richardson-extrapolated central second difference.

    Args:
        spec: Norm description
        v: Vector in the open conic domain
        step: Difference step, defaults to 1e-4 |v|

    Returns:
        FundamentalTensor: symmetric matrix at v
    """
    v = _as_vector(v)
    length = float(np.linalg.norm(v))
    if length == 0:
        raise ValueError("fundamental_tensor requires a nonzero vector")
    h = step if step is not None else 1e-4 * length
    if h <= 0:
        raise ValueError("step must be positive")

    u = v / length
    n = _rot90(u)
    offsets = np.array([-2.0, -1.0, 0.0, 1.0, 2.0]) * h
    stencil = v[None, :] + offsets[:, None] * n[None, :]
    values = eval_norm_batch(spec, stencil) ** 2
    if not np.all(np.isfinite(values)):
        raise BoundaryProximityError(f"Vector {v.tolist()} lies within 2*step of the domain boundary")

    l_m2, l_m1, l_0, l_p1, l_p2 = values
    g_uu = l_0 / length**2
    g_un = 0.5 * (l_p1 - l_m1) / (2.0 * h) / length
    second_h = (l_p1 - 2.0 * l_0 + l_m1) / h**2
    second_2h = (l_p2 - 2.0 * l_0 + l_m2) / (2.0 * h) ** 2
    g_nn = 0.5 * (4.0 * second_h - second_2h) / 3.0

    frame = np.column_stack([u, n])
    local = np.array([[g_uu, g_un], [g_un, g_nn]])
    matrix = frame @ local @ frame.T
    return FundamentalTensor(vector=v, matrix=0.5 * (matrix + matrix.T))


def classify_signature(g: Union[FundamentalTensor, np.ndarray]) -> Signature:
    """Classify eigenvalue signs with tolerance 1e-9 times the largest magnitude"""
    matrix = g.matrix if isinstance(g, FundamentalTensor) else _as_matrix(g)
    eigenvalues = np.linalg.eigvalsh(matrix)
    tolerance = 1e-9 * float(np.max(np.abs(eigenvalues)))
    positive = int(np.sum(eigenvalues > tolerance))
    negative = int(np.sum(eigenvalues < -tolerance))
    if positive == 2:
        return Signature.POSITIVE_DEFINITE
    if negative == 2:
        return Signature.NEGATIVE_DEFINITE
    if positive == 1 and negative == 1:
        return Signature.LORENTZIAN
    return Signature.DEGENERATE


# ---------------------------------------------------------------------------
# Indicatrix
# ---------------------------------------------------------------------------

def indicatrix_sample(spec: NormSpec, count: int) -> List[np.ndarray]:
    """
    Sample the indicatrix {F = 1} inside the conic domain

    Directions are spread evenly over the open domain and rescaled onto the
    indicatrix, so samples come out parameter ordered.

    Args:
        spec: Norm description
        count: Number of directions to try, at least 4 so the four-point
            axis sample of a closed indicatrix is allowed; 8 or more are
            needed to resolve a curved or open component

    Returns:
        List of vectors v with F(v) = 1
    """
    if count < 4:
        raise ConfigurationError(f"indicatrix_sample needs count >= 4, got {count}")
    domain = conic_domain(spec)
    angles = domain.angles(count)
    directions = np.column_stack([np.cos(angles), np.sin(angles)])
    values = eval_norm_batch(spec, directions)
    admissible = np.isfinite(values) & (values > 0)
    if int(np.sum(admissible)) < 3:
        raise EmptyIndicatrixError("Fewer than 3 admissible directions on the indicatrix")
    return [d / f for d, f in zip(directions[admissible], values[admissible])]


def strong_convexity_check(spec: NormSpec, count: int = 16) -> ConvexityReport:
    """
    Check positivity of g_v restricted to the indicatrix tangent

    For the upper (Lorentz) sheet the position vector points into the ball,
    so the restriction is reported with the inward orientation, i.e. negated.
    """
    if count < 16:
        raise ConfigurationError(f"strong_convexity_check needs count >= 16, got {count}")
    upper = isinstance(spec, ZermeloSheet) and spec.sheet == Sheet.UPPER
    orientation = -1.0 if upper else 1.0
    tangent_values = []
    eigenvalues = []
    for v in indicatrix_sample(spec, count):
        g = fundamental_tensor(spec, v)
        tangent = _rot90(g.matrix @ v)
        tangent = tangent / np.linalg.norm(tangent)
        tangent_values.append(orientation * g(tangent, tangent))
        eigenvalues.append(float(np.min(g.eigenvalues)))
    min_tangent = float(min(tangent_values))
    return ConvexityReport(
        passed=min_tangent > 0,
        min_tangent_value=min_tangent,
        min_eigenvalue=float(min(eigenvalues)),
        samples=len(tangent_values),
        oriented_inward=upper,
    )
