"""Projected gradient descent over lookup-table RIS configurations.

Solves ``min_{s, w} sum_p ||g_p - s B_p w||^2`` with every ``w_m`` restricted
to a finite table. A single (B, g) block is the full-grid problem; several
blocks are the spherical-cut problem.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .beam_targets import TargetPattern
from .lookup_tables import LookupTable, project, project_indices

SCALE_MODES = ("printed", "stacked")


class SolverError(RuntimeError):
    pass


class DegenerateScaleError(SolverError, ZeroDivisionError):
    """``B w`` vanishes so the least-squares scale is undefined."""


class ConvergenceWarning(UserWarning):
    pass


@dataclass(frozen=True)
class SolverOptions:
    """Solver settings.

    ``scale_mode`` selects how the cut solver combines per-cut scale factors:
    ``"printed"`` sums the per-cut ratios, ``"stacked"`` solves the joint
    least-squares scale over all cuts. It has no effect with a single block.
    """

    beta: float = 0.5
    max_iterations: int = 200
    rel_tolerance: float = 1e-6
    conjugate_scaling: bool = True
    seed: int = 0
    scale_mode: str = "printed"

    def __post_init__(self):
        if not 0.0 < self.beta < 1.0:
            raise ValueError(f"beta must lie in (0, 1), got {self.beta}")
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise ValueError(f"max_iterations must be a positive integer, got {self.max_iterations}")
        if not self.rel_tolerance > 0:
            raise ValueError(f"rel_tolerance must be positive, got {self.rel_tolerance}")
        if self.scale_mode not in SCALE_MODES:
            raise ValueError(f"scale_mode must be one of {SCALE_MODES}, got {self.scale_mode!r}")


@dataclass
class SynthesisResult:
    omega: np.ndarray
    s: complex
    objective: float
    objective_trace: np.ndarray
    scale_trace: np.ndarray
    iterations_run: int
    converged: bool
    table_indices: np.ndarray = field(repr=False, default=None)


def optimal_scale(B, g, omega) -> complex:
    """Closed-form minimiser over complex ``s`` of ``||g - s B omega||^2``."""
    y = np.asarray(B) @ np.asarray(omega)
    den = np.vdot(y, y).real
    if den == 0.0:
        raise DegenerateScaleError("B @ omega is zero; the scale factor is undefined")
    return complex(np.vdot(y, _samples(g)) / den)


def power_iteration(H, max_iter: int = 5000, tol: float = 1e-14, seed: int = 0):
    """Largest eigenpair of a Hermitian PSD matrix.

    Starts from the normalized all-ones vector and restarts from a seeded
    random vector if the iterate falls into the null space.

    Returns
    -------
    value : float
    vector : ndarray
    converged : bool
    """
    H = np.asarray(H)
    n = H.shape[0]
    if H.ndim != 2 or H.shape[1] != n:
        raise ValueError(f"expected a square matrix, got shape {H.shape}")
    rng = np.random.default_rng(seed)
    v = np.ones(n, dtype=complex) / np.sqrt(n)
    value = 0.0
    restarts = 0
    for _ in range(max_iter):
        w = H @ v
        norm = np.linalg.norm(w)
        if norm == 0.0:
            if not np.any(H) or restarts >= 10:
                return 0.0, v, True
            restarts += 1
            v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            v /= np.linalg.norm(v)
            continue
        new_value = float(np.vdot(v, w).real)
        v = w / norm
        if abs(new_value - value) <= tol * abs(new_value):
            return new_value, v, True
        value = new_value
    return value, v, False


def largest_eigenvalue(H, max_iter: int = 5000, seed: int = 0) -> float:
    value, _, converged = power_iteration(H, max_iter=max_iter, seed=seed)
    if not converged:
        warnings.warn(f"power iteration did not converge in {max_iter} iterations; "
                      f"returning best estimate {value!r}", ConvergenceWarning, stacklevel=2)
    return value


def gram_largest_eigenvalue(B, seed: int = 0) -> float:
    """``lambda_max(B^H B)``, iterating on whichever Gram matrix is smaller."""
    B = np.asarray(B)
    G = B @ B.conj().T if B.shape[0] < B.shape[1] else B.conj().T @ B
    return largest_eigenvalue(G, seed=seed)


def gradient_step(omega_prev, s, B, g, beta, lambda_max, conjugate_scaling=True) -> np.ndarray:
    """Unconstrained step ``omega + beta c B^H (g - s B omega) / lambda_max``.

    ``lambda_max`` is the largest eigenvalue of ``|s|^2 B^H B``; ``c`` is
    ``conj(s)`` when ``conjugate_scaling`` is set and 1 otherwise.
    """
    B = np.asarray(B)
    omega_prev = np.asarray(omega_prev, dtype=complex)
    g = _samples(g)
    if B.shape != (g.size, omega_prev.size):
        raise ValueError(f"dimension mismatch: B {B.shape}, g {g.shape}, omega {omega_prev.shape}")
    if not lambda_max > 0:
        raise ValueError("lambda_max must be positive")
    c = np.conj(s) if conjugate_scaling else 1.0
    return omega_prev + beta * c * (B.conj().T @ (g - s * (B @ omega_prev))) / lambda_max


def _samples(g) -> np.ndarray:
    if isinstance(g, TargetPattern):
        return g.samples
    return np.asarray(g, dtype=complex).ravel()


class _Blocks:
    """Per-cut response matrices and targets with cached spectral norms."""

    def __init__(self, pairs, seed):
        self.B = []
        self.g = []
        for B, g in pairs:
            B = np.asarray(B, dtype=complex)
            g = _samples(g)
            if B.ndim != 2 or B.shape[0] != g.size:
                raise ValueError(f"response matrix {B.shape} does not match {g.size} target samples")
            self.B.append(B)
            self.g.append(g)
        if not self.B:
            raise ValueError("at least one (B, g) pair is required")
        m = {B.shape[1] for B in self.B}
        if len(m) != 1:
            raise ValueError(f"inconsistent element counts across cuts: {sorted(m)}")
        self.n_elements = m.pop()
        if not any(np.any(g) for g in self.g):
            raise ValueError("target pattern is identically zero")
        self.lam = [gram_largest_eigenvalue(B, seed=seed) for B in self.B]

    def initial_point(self):
        return sum(np.linalg.lstsq(B, g, rcond=1e-10)[0] for B, g in zip(self.B, self.g))

    def scale(self, omega, mode):
        ys = [B @ omega for B in self.B]
        nums = [np.vdot(y, g) for y, g in zip(ys, self.g)]
        dens = [np.vdot(y, y).real for y in ys]
        if mode == "printed":
            s = sum(n / d for n, d in zip(nums, dens) if d > 0)
        else:
            den = sum(dens)
            s = sum(nums) / den if den > 0 else 0.0
        return complex(s), ys

    def objective(self, s, ys):
        return float(sum(np.vdot(r, r).real for r in (g - s * y for g, y in zip(self.g, ys))))

    def step(self, omega, s, beta, conjugate_scaling):
        if s == 0:
            # degenerate B w: take a plain correlation step towards the target
            s_eff, c = 1.0, 1.0
        else:
            s_eff, c = s, (np.conj(s) if conjugate_scaling else 1.0)
        total = np.zeros_like(omega)
        for B, g, lam in zip(self.B, self.g, self.lam):
            total += c * (B.conj().T @ (g - s_eff * (B @ omega))) / (abs(s_eff) ** 2 * lam)
        return omega + beta * total


def _descend(blocks: _Blocks, table: LookupTable, opts: SolverOptions) -> SynthesisResult:
    mode = "stacked" if len(blocks.B) == 1 else opts.scale_mode
    omega = project(blocks.initial_point(), table)
    s, ys = blocks.scale(omega, mode)
    obj = blocks.objective(s, ys)
    objectives, scales = [obj], [s]
    best = (obj, omega, s)
    converged = obj == 0.0
    r = 0
    while not converged and r < opts.max_iterations:
        r += 1
        new_omega = project(blocks.step(omega, s, opts.beta, opts.conjugate_scaling), table)
        s, ys = blocks.scale(new_omega, mode)
        new_obj = blocks.objective(s, ys)
        objectives.append(new_obj)
        scales.append(s)
        if new_obj < best[0]:
            best = (new_obj, new_omega, s)
        converged = (np.array_equal(new_omega, omega) or new_obj == 0.0
                     or abs(obj - new_obj) < opts.rel_tolerance * obj)
        omega, obj = new_omega, new_obj
    best_obj, best_omega, best_s = best
    return SynthesisResult(
        omega=best_omega,
        s=best_s,
        objective=best_obj,
        objective_trace=np.asarray(objectives),
        scale_trace=np.asarray(scales),
        iterations_run=r,
        converged=converged,
        table_indices=project_indices(best_omega, table),
    )


def synthesize_full(B, g, table: LookupTable, opts: SolverOptions | None = None) -> SynthesisResult:
    """Projected gradient descent on a single response matrix and target."""
    opts = opts or SolverOptions()
    return _descend(_Blocks([(B, g)], opts.seed), table, opts)


def synthesize_cuts(cut_pairs, table: LookupTable, opts: SolverOptions | None = None) -> SynthesisResult:
    """Reduced-complexity variant over a list of per-cut ``(B, g)`` pairs.

    Each cut's gradient term is normalized by its own ``lambda_max``; the
    objective is the summed cut residual.
    """
    opts = opts or SolverOptions()
    return _descend(_Blocks(cut_pairs, opts.seed), table, opts)
