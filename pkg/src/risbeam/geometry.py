"""Coordinate conventions and planar RIS element placement.

Azimuth ``theta`` is measured in the x-y plane from +x; elevation ``phi`` is
measured from the x-y plane towards +z. The built-in planar array lies in the
x-z plane with boresight +y.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

SPEED_OF_LIGHT = 299792458.0


class DegeneratePointError(ValueError):
    """Raised when a point coincides with a coordinate origin or array element."""


class SphericalPoint(NamedTuple):
    rho: float
    theta: float
    phi: float


def wavelength(frequency_hz: float) -> float:
    if not frequency_hz > 0:
        raise ValueError(f"frequency must be positive, got {frequency_hz}")
    return SPEED_OF_LIGHT / frequency_hz


def as_points(points) -> np.ndarray:
    """Return ``points`` as a finite float array of shape (N, 3)."""
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise ValueError(f"expected points of shape (N, 3), got {np.shape(points)}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("points must be finite")
    return arr


def spherical_to_cartesian(rho, theta, phi, origin=(0.0, 0.0, 0.0)) -> np.ndarray:
    """Convert spherical coordinates about ``origin`` to Cartesian positions.

    Inputs broadcast against each other; the result has shape ``(..., 3)``.
    """
    rho, theta, phi = np.broadcast_arrays(
        np.asarray(rho, dtype=float), np.asarray(theta, dtype=float), np.asarray(phi, dtype=float)
    )
    if np.any(rho < 0):
        raise ValueError("rho must be non-negative")
    cos_phi = np.cos(phi)
    xyz = np.stack([cos_phi * np.cos(theta), cos_phi * np.sin(theta), np.sin(phi)], axis=-1)
    return np.asarray(origin, dtype=float) + rho[..., None] * xyz


def cartesian_to_spherical(p, origin=(0.0, 0.0, 0.0)) -> SphericalPoint:
    """Inverse of :func:`spherical_to_cartesian` for a single point.

    At the poles (``cos(phi) == 0``) the azimuth is set to 0.
    """
    d = np.asarray(p, dtype=float) - np.asarray(origin, dtype=float)
    rho = float(np.linalg.norm(d))
    if rho == 0.0:
        raise DegeneratePointError("point coincides with the origin")
    # atan2 stays well conditioned near the poles, unlike asin(z / rho)
    phi = float(np.arctan2(d[2], np.hypot(d[0], d[1])))
    if d[0] == 0.0 and d[1] == 0.0:
        theta = 0.0
    else:
        theta = float(np.arctan2(d[1], d[0]))
        if theta >= np.pi:
            theta -= 2 * np.pi
    return SphericalPoint(rho, theta, phi)


@dataclass(frozen=True, eq=False)
class ArrayGeometry:
    """Element positions (M, 3), phase center and wavelength of an RIS panel."""

    element_positions: np.ndarray
    phase_center: np.ndarray
    wavelength: float

    def __post_init__(self):
        pos = as_points(self.element_positions)
        center = as_points(self.phase_center)[0]
        if not self.wavelength > 0:
            raise ValueError("wavelength must be positive")
        pos.setflags(write=False)
        center.setflags(write=False)
        object.__setattr__(self, "element_positions", pos)
        object.__setattr__(self, "phase_center", center)

    @property
    def n_elements(self) -> int:
        return self.element_positions.shape[0]

    @property
    def wavenumber(self) -> float:
        return 2 * np.pi / self.wavelength


def planar_array(rows: int, cols: int, spacing: float, center=(0.0, 0.0, 0.0),
                 wavelength: float = 1.0) -> ArrayGeometry:
    """Regular ``rows x cols`` grid in the x-z plane centred on ``center``.

    Rows run along z and columns along x; element ``m = row * cols + col``.
    """
    if int(rows) != rows or int(cols) != cols or rows < 1 or cols < 1:
        raise ValueError(f"rows and cols must be positive integers, got {rows}x{cols}")
    if not spacing > 0:
        raise ValueError(f"spacing must be positive, got {spacing}")
    center = as_points(center)[0]
    z = (np.arange(rows) - (rows - 1) / 2) * spacing
    x = (np.arange(cols) - (cols - 1) / 2) * spacing
    zz, xx = np.meshgrid(z, x, indexing="ij")
    pos = np.stack([xx.ravel(), np.zeros(xx.size), zz.ravel()], axis=1) + center
    return ArrayGeometry(pos, center, wavelength)
