import itertools

import numpy as np
import pytest

from conftest import random_far_point, random_geometry
from risbeam.array_response import cascade
from risbeam.geometry import ArrayGeometry
from risbeam.pattern_eval import evaluate
from risbeam.reference_oracles import (BudgetExceededError, OracleBudget, brute_force_optimum,
                                       naive_pattern, nearest_point, scaled_residual)
from risbeam.synthesis import optimal_scale


def crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def test_brute_force_singleton_table():
    rng = np.random.default_rng(30)
    B, g = crandn(rng, 6, 3), crandn(rng, 6)
    c = 0.2 - 0.7j
    omega, s, obj = brute_force_optimum(B, g, [c])
    assert omega.tolist() == [c] * 3
    y = B @ omega
    expected = np.linalg.norm(g - optimal_scale(B, g, omega) * y) ** 2
    assert obj == pytest.approx(expected, rel=1e-12)
    assert s == pytest.approx(optimal_scale(B, g, omega), rel=1e-12)


def test_brute_force_realizable():
    rng = np.random.default_rng(31)
    table = np.array([1, 1j, -1, -1j])
    for _ in range(10):
        B = crandn(rng, 8, 4)
        w = table[rng.integers(0, 4, 4)]
        omega, s, obj = brute_force_optimum(B, B @ w, table)
        assert obj <= 1e-18


def test_brute_force_dominates_random_sampling():
    rng = np.random.default_rng(32)
    for _ in range(3):
        B, g = crandn(rng, 8, 3), crandn(rng, 8)
        c = crandn(rng, 4)
        c /= np.abs(c).max()
        _, _, best = brute_force_optimum(B, g, c)
        for _ in range(1000):
            w = c[rng.integers(0, 4, 3)]
            _, obj = scaled_residual(B.tolist(), g.tolist(), w.tolist())
            assert best <= obj + 1e-12


def test_brute_force_lexicographic_ties():
    # g = 0 makes every configuration optimal; the first index tuple wins
    B = np.ones((2, 2), dtype=complex)
    omega, _, obj = brute_force_optimum(B, np.zeros(2), [1.0, 2.0])
    assert obj == 0.0 and omega.tolist() == [1.0, 1.0]


def test_brute_force_matches_plain_enumeration():
    rng = np.random.default_rng(33)
    B, g = crandn(rng, 5, 3), crandn(rng, 5)
    c = np.array([1.0, -1.0, 0.5j])
    best = min(scaled_residual(B.tolist(), g.tolist(), list(w))[1] for w in itertools.product(c, repeat=3))
    assert brute_force_optimum(B, g, c)[2] == pytest.approx(best, rel=1e-10)


def test_budget_exceeded():
    with pytest.raises(BudgetExceededError):
        brute_force_optimum(np.ones((2, 5)), np.ones(2), [1, -1, 1j, -1j], OracleBudget(max_configs=100))
    assert 14 ** 4 <= OracleBudget().max_configs and 4 ** 8 <= OracleBudget().max_configs


def test_nearest_point_strict_first():
    assert nearest_point([0.0], [1.0, -1.0]) == [1.0]
    assert nearest_point([0.9 + 0.1j, -2], [1.0, -1.0]) == [1.0, -1.0]


def test_naive_pattern_matches_evaluate(rng):
    for _ in range(100):
        m = int(rng.integers(1, 33))
        geom = random_geometry(rng, m)
        tx = random_far_point(rng, geom.phase_center)
        pts = np.array([random_far_point(rng, geom.phase_center) for _ in range(int(rng.integers(1, 51)))])
        w = crandn(rng, m) / np.sqrt(2)
        np.testing.assert_allclose(naive_pattern(w, geom, tx, pts), evaluate(w, geom, tx, pts), rtol=0, atol=1e-12)


def test_naive_single_element_constant(rng):
    geom = ArrayGeometry(np.array([[0.1, 0.2, 0.3]]), np.array([0.1, 0.2, 0.3]), 0.06)
    tx = random_far_point(rng, geom.phase_center)
    pts = [random_far_point(rng, geom.phase_center) for _ in range(10)]
    c = 0.4 - 0.3j
    np.testing.assert_allclose(naive_pattern([c], geom, tx, pts), c, atol=1e-13)


def test_naive_steered_peak(small_geometry):
    tx, p = np.array([5.0, 5.0, 0.0]), np.array([1.0, 2.0, 1.0])
    w = np.conj(cascade(small_geometry, p, tx))
    assert naive_pattern(w, small_geometry, tx, [p])[0] == pytest.approx(16.0, abs=1e-12)
