"""Fixtures for linalg tests."""

import numpy as np
import pytest


@pytest.fixture
def rng():
    """Seeded generator for reproducible random systems."""
    return np.random.default_rng(20240611)


@pytest.fixture
def well_conditioned_matrix(rng):
    """Random 100x100 complex matrix shifted away from singularity."""
    n = 100
    a = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(n)
    return a + 3.0 * np.eye(n)
