import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def ball_point(rng, n, rmax):
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return rmax * rng.uniform(0.2, 1.0) * v / np.linalg.norm(v)


def sphere_point(rng, n):
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)
