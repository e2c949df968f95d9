"""Slow, independent reference implementations used by the test-suite.

Nothing in here imports the optimized package modules; agreement between the
two is the point of the exercise.
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass

import numpy as np


class BudgetExceededError(ValueError):
    pass


@dataclass(frozen=True)
class OracleBudget:
    max_configs: int = 10**6
    max_grid: int = 60

    def __post_init__(self):
        if self.max_configs < 1 or self.max_grid < 1:
            raise ValueError("oracle budgets must be positive")


def nearest_point(values, coefficients) -> list[complex]:
    """Exhaustive nearest table entry per value, first index on ties."""
    out = []
    for v in values:
        v = complex(v)
        best, best_d = None, math.inf
        for c in coefficients:
            c = complex(c)
            dre = v.real - c.real
            dim = v.imag - c.imag
            d = dre * dre + dim * dim
            if d < best_d:
                best, best_d = c, d
        out.append(best)
    return out


def scaled_residual(B, g, omega):
    """(s, ||g - s B omega||^2) with the least-squares s; s = 0 when B omega = 0."""
    y = [sum(B[k][m] * omega[m] for m in range(len(omega))) for k in range(len(B))]
    den = sum(abs(v) ** 2 for v in y)
    s = sum(v.conjugate() * gk for v, gk in zip(y, g)) / den if den > 0 else 0j
    return s, sum(abs(gk - s * v) ** 2 for v, gk in zip(y, g))


def brute_force_optimum(B, g, table, budget: OracleBudget = OracleBudget()):
    """Global minimiser of ``||g - s B omega||^2`` over every table configuration.

    Configurations are visited in lexicographic index order and only a
    strictly smaller objective replaces the incumbent.
    """
    B = np.asarray(B, dtype=complex)
    g = np.asarray(g, dtype=complex)
    coeffs = np.asarray(table, dtype=complex).ravel()
    m = B.shape[1]
    if len(coeffs) ** m > budget.max_configs:
        raise BudgetExceededError(f"{len(coeffs)}^{m} configurations exceed budget {budget.max_configs}")
    g_norm = float(np.vdot(g, g).real)
    best = (math.inf, None, None)
    configs = itertools.product(range(len(coeffs)), repeat=m)
    while True:
        chunk = np.array(list(itertools.islice(configs, 8192)), dtype=int)
        if chunk.size == 0:
            break
        W = coeffs[chunk]
        Y = W @ B.T
        den = np.einsum("ij,ij->i", Y.conj(), Y).real
        num = Y.conj() @ g
        with np.errstate(divide="ignore", invalid="ignore"):
            s = np.where(den > 0, num / np.where(den > 0, den, 1.0), 0.0)
        R = g[None, :] - s[:, None] * Y
        obj = np.einsum("ij,ij->i", R.conj(), R).real
        obj = np.where(den > 0, obj, g_norm)
        i = int(np.argmin(obj))
        if obj[i] < best[0]:
            best = (float(obj[i]), W[i].copy(), complex(s[i]))
    objective, omega, s = best
    return omega, s, objective


def naive_pattern(omega, geom, tx, points) -> list[complex]:
    """Pattern ``sum_m omega_m a_m(p) a_m(tx)`` by explicit loops over points and elements."""
    k = 2 * math.pi / geom.wavelength
    center = [float(c) for c in geom.phase_center]
    elements = [[float(c) for c in p] for p in geom.element_positions]
    tx = [float(c) for c in tx]

    def phase(p, q):
        return math.dist(p, q)

    out = []
    for p in points:
        p = [float(c) for c in p]
        acc = 0j
        for w, pm in zip(omega, elements):
            delay = (phase(p, pm) - phase(p, center)) + (phase(tx, pm) - phase(tx, center))
            acc += complex(w) * cmath.exp(-1j * k * delay)
        out.append(acc)
    return out


def grid_scale_minimizer(B, g, omega, levels: int = 21, rounds: int = 40):
    """Nested grid search over (Re s, Im s) for the best scale factor."""
    y = np.asarray(B) @ np.asarray(omega)
    g = np.asarray(g)
    radius = 2.0 * (np.linalg.norm(g) / np.linalg.norm(y) + 1.0)
    center = 0j
    for _ in range(rounds):
        offsets = np.linspace(-radius, radius, levels)
        cand = center + offsets[:, None] + 1j * offsets[None, :]
        res = np.linalg.norm(g[None, None, :] - cand[..., None] * y[None, None, :], axis=2)
        center = cand.flat[int(np.argmin(res))]
        radius *= 0.25
    return complex(center)


def bisection_largest_eigenvalue(H, scan_steps: int = 4000, bisections: int = 200) -> float:
    """Largest root of ``det(H - x I)`` for Hermitian ``H`` by scan-and-bisect.

    Scans downward from a Gershgorin bound until the determinant changes sign,
    then bisects the bracket.
    """
    H = np.asarray(H, dtype=complex)
    n = H.shape[0]
    eye = np.eye(n)

    def sign(x):
        # det of a Hermitian matrix is real; drop the rounding phase
        return float(np.sign(np.linalg.slogdet(H - x * eye)[0].real))

    hi = float(np.max(np.sum(np.abs(H), axis=1))) + 1.0
    top = sign(hi)
    step = hi / scan_steps
    lo = hi
    while True:
        lo -= step
        if sign(lo) != top:
            break
        if lo < -hi:
            raise ValueError("no eigenvalue bracket found")
    a, b = lo, lo + step
    for _ in range(bisections):
        mid = 0.5 * (a + b)
        if sign(mid) == top:
            b = mid
        else:
            a = mid
    return 0.5 * (a + b)
