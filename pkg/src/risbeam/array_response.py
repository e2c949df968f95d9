"""RIS response vectors, the cascaded TX/RX response and its derivatives."""
from __future__ import annotations

import numpy as np

from .geometry import ArrayGeometry, DegeneratePointError, as_points

DERIVATIVE_VARIABLES = ("x", "y", "z", "rho", "theta", "phi")


def _distances(geom: ArrayGeometry, pts: np.ndarray):
    diff = pts[:, None, :] - geom.element_positions[None, :, :]
    dist = np.linalg.norm(diff, axis=2)
    ref = pts - geom.phase_center
    ref_dist = np.linalg.norm(ref, axis=1)
    if np.any(dist == 0.0) or np.any(ref_dist == 0.0):
        raise DegeneratePointError("point coincides with an element or the phase center")
    return diff, dist, ref, ref_dist


def _squeeze(out, points):
    return out[0] if np.ndim(points) == 1 else out


def path_difference(geom: ArrayGeometry, points) -> np.ndarray:
    """``|p - p_m| - |p - p_RIS|`` for every point and element, shape (N, M)."""
    _, dist, _, ref_dist = _distances(geom, as_points(points))
    return dist - ref_dist[:, None]


def steering(geom: ArrayGeometry, points) -> np.ndarray:
    """Near-field response ``a(p)`` of shape (M,) or (N, M) for N points.

    Entry m is ``exp(-j k (|p - p_m| - |p - p_RIS|))``.
    """
    out = np.exp(-1j * geom.wavenumber * path_difference(geom, points))
    return _squeeze(out, points)


def cascade(geom: ArrayGeometry, p_rx, p_tx) -> np.ndarray:
    """Cascaded response ``b = a(p_rx) * a(p_tx)``; ``p_rx`` may be a batch.

    Evaluated as a single exponential of the summed path differences, which
    keeps the result exactly symmetric in its two points.
    """
    rx = path_difference(geom, p_rx)
    tx = path_difference(geom, p_tx)
    if np.ndim(p_tx) == 1 or len(tx) == 1:
        tx = tx[0]
    out = np.exp(-1j * geom.wavenumber * (rx + tx))
    return _squeeze(out, p_rx)


def _direction_derivative(geom: ArrayGeometry, pts: np.ndarray, var: str) -> np.ndarray:
    """Partial derivative of each point's Cartesian position w.r.t. ``var``, shape (N, 3)."""
    if var in ("x", "y", "z"):
        out = np.zeros_like(pts)
        out[:, "xyz".index(var)] = 1.0
        return out
    d = pts - geom.phase_center
    rho = np.linalg.norm(d, axis=1)
    rho_xy = np.hypot(d[:, 0], d[:, 1])
    if var == "rho":
        return d / rho[:, None]
    if var == "theta":
        # d/dtheta of rho*cos(phi)*[cos t, sin t, 0] = [-y, x, 0]
        return np.stack([-d[:, 1], d[:, 0], np.zeros(len(d))], axis=1)
    if var == "phi":
        # rho*[-sin(phi)cos(t), -sin(phi)sin(t), cos(phi)]
        with np.errstate(invalid="ignore", divide="ignore"):
            scale = np.where(rho_xy > 0, d[:, 2] / rho_xy, 0.0)
        return np.stack([-d[:, 0] * scale, -d[:, 1] * scale, rho_xy], axis=1)
    raise ValueError(f"unknown derivative variable {var!r}; expected one of {DERIVATIVE_VARIABLES}")


def cascade_derivative(geom: ArrayGeometry, p_rx, p_tx, var: str = "phi") -> np.ndarray:
    """Analytic partial derivative of ``cascade`` with respect to a coordinate of ``p_rx``.

    Spherical variables are taken about the array phase center.
    """
    if var not in DERIVATIVE_VARIABLES:
        raise ValueError(f"unknown derivative variable {var!r}; expected one of {DERIVATIVE_VARIABLES}")
    pts = as_points(p_rx)
    diff, dist, ref, ref_dist = _distances(geom, pts)
    dp = _direction_derivative(geom, pts, var)
    d_dist = np.einsum("nmk,nk->nm", diff, dp) / dist
    d_ref = np.einsum("nk,nk->n", ref, dp) / ref_dist
    b = cascade(geom, pts, p_tx)
    out = -1j * geom.wavenumber * (d_dist - d_ref[:, None]) * b
    return _squeeze(out, p_rx)
