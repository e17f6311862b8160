"""Fixtures for geometry tests."""

import pytest

from proxyscat.features.geom.schemas import RectProxySpec, ShapeSpec


@pytest.fixture
def unit_circle():
    """Unit circle centered at the origin."""
    return ShapeSpec(kind="ellipse", a=1.0, b=1.0)


@pytest.fixture
def photonic_star():
    """Star ellipse with the photonic-crystal dimensions."""
    return ShapeSpec(kind="star_ellipse", a=0.05 / 3, b=0.1 / 3, center=(0.3, -0.2))


@pytest.fixture
def unit_square_proxy():
    """Unit square centered at the origin, one panel per side."""
    return RectProxySpec(width=1.0, height=1.0)
