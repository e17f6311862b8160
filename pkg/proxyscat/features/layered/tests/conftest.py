"""Fixtures for layered-medium tests."""

import numpy as np
import pytest

from proxyscat.features.layered.kernels import LayeredContext
from proxyscat.features.layered.sommerfeld import build_sommerfeld_rule


def make_context(k_plus, k_minus, delta=0.5, extent=3.0, tol=1e-12, **kwargs):
    """LayeredContext with a rule sized for sources above delta within extent."""
    rule = build_sommerfeld_rule(
        k_plus, k_minus, delta, extent, tol=tol, vertical_extent=extent, **kwargs
    )
    return LayeredContext(k_plus=k_plus, k_minus=k_minus, rule=rule)


@pytest.fixture
def contrast_context():
    """(k_plus, k_minus) = (pi, 1.3 pi) with delta 0.5."""
    return make_context(np.pi, 1.3 * np.pi)


@pytest.fixture
def degenerate_context():
    """Equal wavenumbers above and below."""
    return make_context(2.0, 2.0)


@pytest.fixture
def context_factory():
    """Builder for contexts with custom rule settings."""
    return make_context
