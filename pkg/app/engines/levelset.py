"""
Level-set numerics for exact-time reachable sets

The reachable set at parameter length t is {phi(., t) <= 0} where
phi_t + S(x, grad phi) = 0 and S is the velocity-body support function.
Gradients are fifth-order WENO, the numerical Hamiltonian is local
Lax-Friedrichs and time stepping is third-order TVD Runge-Kutta.
"""

from typing import Callable, Tuple

import numpy as np
from scipy.interpolate import RegularGridInterpolator

Hamiltonian = Callable[[np.ndarray, np.ndarray], np.ndarray]

GHOST = 3


def pad(phi: np.ndarray) -> np.ndarray:
    """Three ghost cells per side by linear extrapolation"""
    return np.pad(phi, GHOST, mode="reflect", reflect_type="odd")


def _weno(v1, v2, v3, v4, v5):
    p1 = v1 / 3.0 - 7.0 * v2 / 6.0 + 11.0 * v3 / 6.0
    p2 = -v2 / 6.0 + 5.0 * v3 / 6.0 + v4 / 3.0
    p3 = v3 / 3.0 + 5.0 * v4 / 6.0 - v5 / 6.0
    s1 = 13.0 / 12.0 * (v1 - 2.0 * v2 + v3) ** 2 + 0.25 * (v1 - 4.0 * v2 + 3.0 * v3) ** 2
    s2 = 13.0 / 12.0 * (v2 - 2.0 * v3 + v4) ** 2 + 0.25 * (v2 - v4) ** 2
    s3 = 13.0 / 12.0 * (v3 - 2.0 * v4 + v5) ** 2 + 0.25 * (3.0 * v3 - 4.0 * v4 + v5) ** 2
    eps = 1e-6 * np.maximum.reduce([v1 * v1, v2 * v2, v3 * v3, v4 * v4, v5 * v5]) + 1e-99
    a1 = 0.1 / (s1 + eps) ** 2
    a2 = 0.6 / (s2 + eps) ** 2
    a3 = 0.3 / (s3 + eps) ** 2
    return (a1 * p1 + a2 * p2 + a3 * p3) / (a1 + a2 + a3)


def weno5_gradients(padded: np.ndarray, h: float, axis: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Left- and right-biased derivatives along one axis

    Args:
        padded: Field with GHOST cells on every side
        h: Grid spacing along axis
        axis: 0 for rows (y), 1 for columns (x)

    Returns:
        (minus, plus) derivatives on the interior grid
    """
    other = 1 - axis
    trimmed = np.take(padded, np.arange(GHOST, padded.shape[other] - GHOST), axis=other)
    diffs = np.diff(trimmed, axis=axis) / h
    n = padded.shape[axis] - 2 * GHOST

    def window(k: int) -> np.ndarray:
        return np.take(diffs, np.arange(k, k + n), axis=axis)

    minus = _weno(window(0), window(1), window(2), window(3), window(4))
    plus = _weno(window(5), window(4), window(3), window(2), window(1))
    return minus, plus


def lax_friedrichs_rhs(
    phi: np.ndarray,
    hamiltonian: Hamiltonian,
    alpha_x: np.ndarray,
    alpha_y: np.ndarray,
    dx: float,
    dy: float,
) -> np.ndarray:
    """-H_LLF(grad phi): numerical Hamiltonian at the averaged gradient minus dissipation"""
    padded = pad(phi)
    px_m, px_p = weno5_gradients(padded, dx, axis=1)
    py_m, py_p = weno5_gradients(padded, dy, axis=0)
    value = hamiltonian(0.5 * (px_m + px_p), 0.5 * (py_m + py_p))
    dissipation = 0.5 * alpha_x * (px_p - px_m) + 0.5 * alpha_y * (py_p - py_m)
    return -(value - dissipation)


def tvd_rk3_step(
    phi: np.ndarray,
    dt: float,
    rhs: Callable[[np.ndarray], np.ndarray],
    constrain: Callable[[np.ndarray], np.ndarray],
) -> np.ndarray:
    """One third-order TVD Runge-Kutta step with the state constraint after each stage"""
    stage1 = constrain(phi + dt * rhs(phi))
    stage2 = constrain(0.75 * phi + 0.25 * (stage1 + dt * rhs(stage1)))
    return constrain(phi / 3.0 + 2.0 / 3.0 * (stage2 + dt * rhs(stage2)))


def signed_distance(phi: np.ndarray, dx: float, dy: float) -> np.ndarray:
    """phi / |grad phi|, a first-order signed distance estimate to {phi = 0}"""
    gy, gx = np.gradient(phi, dy, dx)
    return phi / np.maximum(np.hypot(gx, gy), 1e-12)


def interpolator(xs: np.ndarray, ys: np.ndarray, values: np.ndarray) -> RegularGridInterpolator:
    """Bilinear interpolation over cell centres, linearly extrapolated at the rim"""
    return RegularGridInterpolator((ys, xs), values, method="linear", bounds_error=False, fill_value=None)


def sample_field(xs: np.ndarray, ys: np.ndarray, values: np.ndarray, points: np.ndarray) -> np.ndarray:
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    return interpolator(xs, ys, values)(points[:, ::-1])
