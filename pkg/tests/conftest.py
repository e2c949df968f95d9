import numpy as np
import pytest

from risbeam import planar_array, wavelength
from risbeam.geometry import ArrayGeometry


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_geometry(rng, m, lam=None):
    """Random distinct element positions within ~0.3 m of a random center."""
    lam = lam or rng.uniform(0.05, 0.1)
    center = rng.uniform(-0.2, 0.2, size=3)
    pos = center + rng.uniform(-0.3, 0.3, size=(m, 3))
    return ArrayGeometry(pos, center, lam)


def random_far_point(rng, center, rmin=2.0, rmax=6.0):
    d = rng.standard_normal(3)
    return center + rng.uniform(rmin, rmax) * d / np.linalg.norm(d)


@pytest.fixture
def full_geometry():
    lam = wavelength(5.15e9)
    return planar_array(32, 32, lam / 2, (0.0, 0.0, 0.0), lam)


@pytest.fixture
def small_geometry():
    lam = wavelength(5.15e9)
    return planar_array(4, 4, lam / 2, (0.0, 0.0, 0.0), lam)
