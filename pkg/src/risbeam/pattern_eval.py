"""Realized beam patterns over cuts and angular grids, and lobe metrics."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .array_response import cascade
from .geometry import ArrayGeometry, SphericalPoint, as_points, spherical_to_cartesian

DB_FLOOR = -200.0
DEFAULT_EXCLUSION_RADIUS = np.deg2rad(5.0)
DEFAULT_NULL_WINDOW = np.deg2rad(2.0)


def to_db(samples) -> np.ndarray:
    """Amplitude dB ``20 log10 |x|`` with exact zeros mapped to -200 dB."""
    mag = np.abs(np.asarray(samples))
    with np.errstate(divide="ignore"):
        db = 20.0 * np.log10(mag)
    return np.maximum(db, DB_FLOOR)


def evaluate(omega, geom: ArrayGeometry, tx, points) -> np.ndarray:
    """Complex pattern ``omega^T b(p_k, tx)`` at every point."""
    omega = np.asarray(omega, dtype=complex)
    if omega.shape != (geom.n_elements,):
        raise ValueError(f"omega has shape {omega.shape}, expected ({geom.n_elements},)")
    return cascade(geom, as_points(points), tx) @ omega


@dataclass(frozen=True)
class PatternCut:
    """1-D pattern slice; ``axis`` is in radians for angles and meters for rho."""

    coordinate: str
    axis: np.ndarray
    complex_samples: np.ndarray

    @property
    def magnitude_db(self) -> np.ndarray:
        return to_db(self.complex_samples)


@dataclass(frozen=True)
class PatternGrid:
    """Magnitude over a theta x phi grid (radians) at fixed range."""

    theta_axis: np.ndarray
    phi_axis: np.ndarray
    complex_samples: np.ndarray

    def __post_init__(self):
        if self.complex_samples.shape != (len(self.theta_axis), len(self.phi_axis)):
            raise ValueError("grid samples do not match the axes")

    @property
    def magnitude_db(self) -> np.ndarray:
        return to_db(self.complex_samples)


@dataclass(frozen=True)
class PatternMetrics:
    peak_db: float
    peak_location: tuple
    secondary_peak_db: float
    secondary_peak_location: tuple | None
    null_depth_db: float | None = None


def evaluate_cut(omega, geom: ArrayGeometry, tx, reference: SphericalPoint, coordinate: str,
                 values) -> PatternCut:
    """Pattern along one spherical coordinate through ``reference``, others held fixed."""
    values = np.asarray(values, dtype=float)
    ref = SphericalPoint(*reference)
    args = {"rho": ref.rho, "theta": ref.theta, "phi": ref.phi}
    if coordinate not in args:
        raise ValueError(f"unknown cut coordinate {coordinate!r}")
    args[coordinate] = values
    pts = spherical_to_cartesian(args["rho"], args["theta"], args["phi"], geom.phase_center)
    return PatternCut(coordinate, values, evaluate(omega, geom, tx, pts))


def evaluate_grid(omega, geom: ArrayGeometry, tx, rho: float, theta_axis, phi_axis) -> PatternGrid:
    theta_axis = np.asarray(theta_axis, dtype=float)
    phi_axis = np.asarray(phi_axis, dtype=float)
    tt, pp = np.meshgrid(theta_axis, phi_axis, indexing="ij")
    pts = spherical_to_cartesian(rho, tt.ravel(), pp.ravel(), geom.phase_center)
    samples = np.empty(pts.shape[0], dtype=complex)
    # chunked to bound the (points x elements) response memory
    chunk = max(1, 2_000_000 // geom.n_elements)
    for start in range(0, len(pts), chunk):
        samples[start:start + chunk] = evaluate(omega, geom, tx, pts[start:start + chunk])
    return PatternGrid(theta_axis, phi_axis, samples.reshape(tt.shape))


def angular_separation(theta1, phi1, theta2, phi2):
    """Great-circle angle between two (azimuth, elevation) directions."""
    c = (np.sin(phi1) * np.sin(phi2)
         + np.cos(phi1) * np.cos(phi2) * np.cos(np.asarray(theta1) - theta2))
    return np.arccos(np.clip(c, -1.0, 1.0))


def _main_lobe_bounds(db: np.ndarray, k: int):
    lo = k
    while lo > 0 and db[lo - 1] <= db[lo]:
        lo -= 1
    hi = k
    while hi < len(db) - 1 and db[hi + 1] <= db[hi]:
        hi += 1
    return lo, hi


def _cut_metrics(cut: PatternCut, desired, null_window) -> PatternMetrics:
    db = cut.magnitude_db
    if db.size < 2:
        raise ValueError("metrics need at least two samples")
    k = int(np.argmax(db))
    lo, hi = _main_lobe_bounds(db, k)
    outside = np.r_[np.arange(0, lo), np.arange(hi + 1, db.size)]
    if outside.size:
        j = int(outside[np.argmax(db[outside])])
        secondary, secondary_loc = float(db[j]), (float(cut.axis[j]),)
    else:
        secondary, secondary_loc = -np.inf, None
    null_depth = None
    if desired is not None:
        window = np.abs(cut.axis - desired) <= null_window
        if window.any():
            null_depth = float(db[k] - db[window].min())
    return PatternMetrics(float(db[k]), (float(cut.axis[k]),), secondary, secondary_loc, null_depth)


def _grid_metrics(grid: PatternGrid, desired, exclusion_radius, null_window) -> PatternMetrics:
    db = grid.magnitude_db
    if db.size < 2:
        raise ValueError("metrics need at least two samples")
    i, j = np.unravel_index(int(np.argmax(db)), db.shape)
    tt, pp = np.meshgrid(grid.theta_axis, grid.phi_axis, indexing="ij")
    peak_loc = (float(grid.theta_axis[i]), float(grid.phi_axis[j]))
    far = angular_separation(tt, pp, *peak_loc) > exclusion_radius
    if far.any():
        masked = np.where(far, db, -np.inf)
        a, b = np.unravel_index(int(np.argmax(masked)), db.shape)
        secondary, secondary_loc = float(db[a, b]), (float(grid.theta_axis[a]), float(grid.phi_axis[b]))
    else:
        secondary, secondary_loc = -np.inf, None
    null_depth = None
    if desired is not None:
        near = angular_separation(tt, pp, desired[0], desired[1]) <= null_window
        if near.any():
            null_depth = float(db[i, j] - db[near].min())
    return PatternMetrics(float(db[i, j]), peak_loc, secondary, secondary_loc, null_depth)


def metrics(pattern, desired=None, exclusion_radius: float = DEFAULT_EXCLUSION_RADIUS,
            null_window: float = DEFAULT_NULL_WINDOW) -> PatternMetrics:
    """Peak, strongest secondary lobe and (optionally) null depth.

    For a cut the secondary lobe is the maximum beyond the first local minimum
    on either side of the peak; for a grid it is the maximum farther than
    ``exclusion_radius`` from the peak direction. ``desired`` is the cut
    coordinate, or a ``(theta, phi)`` pair for grids, around which the null
    depth is measured.
    """
    if isinstance(pattern, PatternGrid):
        return _grid_metrics(pattern, desired, exclusion_radius, null_window)
    return _cut_metrics(pattern, desired, null_window)


def adjacent_lobe_contrast(cut: PatternCut, coordinate: float) -> float:
    """dB gap between the weaker neighbouring lobe peak and the sample nearest ``coordinate``."""
    db = cut.magnitude_db
    k = int(np.argmin(np.abs(cut.axis - coordinate)))
    left = k
    while left > 0 and db[left - 1] >= db[left]:
        left -= 1
    right = k
    while right < db.size - 1 and db[right + 1] >= db[right]:
        right += 1
    return float(min(db[left], db[right]) - db[k])


def max_near(grid: PatternGrid, theta: float, phi: float, radius: float) -> float:
    """Largest magnitude (dB) among grid cells within ``radius`` of a direction."""
    tt, pp = np.meshgrid(grid.theta_axis, grid.phi_axis, indexing="ij")
    near = angular_separation(tt, pp, theta, phi) <= radius
    if not near.any():
        raise ValueError("no grid cell lies within the requested radius")
    return float(grid.magnitude_db[near].max())


def specular_direction(tx, center=(0.0, 0.0, 0.0), normal=(0.0, 1.0, 0.0)):
    """(theta, phi) of the mirror reflection of the incident direction from ``tx``."""
    d = as_points(tx)[0] - as_points(center)[0]
    n = as_points(normal)[0]
    n = n / np.linalg.norm(n)
    out = 2 * np.dot(d, n) * n - d
    out /= np.linalg.norm(out)
    return float(np.arctan2(out[1], out[0])), float(np.arcsin(np.clip(out[2], -1, 1)))
