"""Desired beam patterns: directional, derivative and multi-beam targets."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .array_response import DERIVATIVE_VARIABLES, cascade, cascade_derivative
from .geometry import (ArrayGeometry, DegeneratePointError, SphericalPoint, as_points,
                       cartesian_to_spherical, spherical_to_cartesian)

BEAM_KINDS = ("directional", "derivative", "multibeam")
CUT_COORDINATES = ("rho", "theta", "phi")


@dataclass(frozen=True)
class BeamSpec:
    kind: str
    desired_points: np.ndarray
    tx: np.ndarray
    derivative_var: str = "phi"

    def __post_init__(self):
        if self.kind not in BEAM_KINDS:
            raise ValueError(f"beam kind must be one of {BEAM_KINDS}, got {self.kind!r}")
        pts = as_points(self.desired_points)
        if self.kind != "multibeam" and len(pts) != 1:
            raise ValueError(f"{self.kind} beams take exactly one desired point, got {len(pts)}")
        if self.derivative_var not in DERIVATIVE_VARIABLES:
            raise ValueError(f"derivative_var must be one of {DERIVATIVE_VARIABLES}")
        object.__setattr__(self, "desired_points", pts)
        object.__setattr__(self, "tx", as_points(self.tx)[0])


@dataclass(frozen=True)
class TargetPattern:
    samples: np.ndarray
    points: np.ndarray

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=complex).ravel()
        points = as_points(self.points)
        if samples.size < 1 or samples.size != len(points):
            raise ValueError(f"{samples.size} samples for {len(points)} points")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "points", points)


def _check_axis(name, values):
    arr = np.atleast_1d(np.asarray(values, dtype=float))
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a nonempty 1-D sequence")
    if np.any(np.diff(arr) <= 0):
        raise ValueError(f"{name} must be strictly increasing")
    return arr


@dataclass(frozen=True)
class CutSpec:
    """Reference points and the discretization sets for the rho/theta/phi cuts.

    Angles are in radians. Empty-set defaults are filled by :meth:`default`.
    """

    reference_points: tuple
    rho_set: np.ndarray
    theta_set: np.ndarray
    phi_set: np.ndarray

    def __post_init__(self):
        refs = tuple(SphericalPoint(*map(float, r)) for r in self.reference_points)
        if not refs:
            raise ValueError("at least one reference point is required")
        object.__setattr__(self, "reference_points", refs)
        for name in ("rho_set", "theta_set", "phi_set"):
            object.__setattr__(self, name, _check_axis(name, getattr(self, name)))

    @classmethod
    def default(cls, reference_points, step_deg: float = 0.5, rho_set=None, origin=(0.0, 0.0, 0.0)):
        """Cuts through Cartesian ``reference_points`` sampled every ``step_deg``.

        Without ``rho_set`` each reference keeps its own radius only.
        """
        refs = [cartesian_to_spherical(p, origin) for p in as_points(reference_points)]
        step = np.deg2rad(step_deg)
        n_theta = int(round(2 * np.pi / step))
        theta = -np.pi + step * np.arange(n_theta)
        n_phi = int(round(np.pi / step)) + 1
        phi = -np.pi / 2 + step * np.arange(n_phi)
        if rho_set is None:
            rho_set = sorted({r.rho for r in refs})
        return cls(tuple(refs), rho_set, theta, phi)


def target_weight(spec: BeamSpec, geom: ArrayGeometry) -> np.ndarray:
    """Unconstrained weight ``w`` whose pattern ``w^T b(p, tx)`` is the target."""
    if spec.kind == "derivative":
        return np.conj(cascade_derivative(geom, spec.desired_points[0], spec.tx, spec.derivative_var))
    b = cascade(geom, spec.desired_points, spec.tx)
    if spec.kind == "directional":
        return np.conj(b[0])
    return np.conj(b).sum(axis=0)


def response_matrix(geom: ArrayGeometry, tx, points) -> np.ndarray:
    """Rows ``b^T(p_k, tx)`` for every point, shape (N, M)."""
    return cascade(geom, as_points(points), tx)


def sample_pattern(weight, geom: ArrayGeometry, tx, points) -> TargetPattern:
    weight = np.asarray(weight, dtype=complex)
    if weight.shape != (geom.n_elements,):
        raise ValueError(f"weight has shape {weight.shape}, expected ({geom.n_elements},)")
    pts = as_points(points)
    return TargetPattern(response_matrix(geom, tx, pts) @ weight, pts)


def cut_points(cut: CutSpec, ris_center=(0.0, 0.0, 0.0)) -> list[dict[str, np.ndarray]]:
    """Cartesian points of the rho, theta and phi cuts through every reference point."""
    out = []
    for ref in cut.reference_points:
        cuts = {
            "rho": spherical_to_cartesian(cut.rho_set, ref.theta, ref.phi, ris_center),
            "theta": spherical_to_cartesian(ref.rho, cut.theta_set, ref.phi, ris_center),
            "phi": spherical_to_cartesian(ref.rho, ref.theta, cut.phi_set, ris_center),
        }
        for pts in cuts.values():
            if np.any(np.all(pts == np.asarray(ris_center, dtype=float), axis=1)):
                raise DegeneratePointError("cut point coincides with the RIS center")
        out.append(cuts)
    return out


def cut_targets(weight, geom: ArrayGeometry, tx, cut: CutSpec) -> list[tuple[np.ndarray, TargetPattern]]:
    """(response matrix, target) pairs for every (reference point, coordinate) cut."""
    pairs = []
    for cuts in cut_points(cut, geom.phase_center):
        for coord in CUT_COORDINATES:
            B = response_matrix(geom, tx, cuts[coord])
            pairs.append((B, TargetPattern(B @ np.asarray(weight, dtype=complex), cuts[coord])))
    return pairs
