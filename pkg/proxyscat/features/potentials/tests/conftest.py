"""Fixtures for layer-potential tests."""

import pytest

from proxyscat.features.geom.curves import discretize_proxy, discretize_scatterer
from proxyscat.features.geom.schemas import RectProxySpec, ShapeSpec


@pytest.fixture
def circle_curve():
    """Unit circle with 128 nodes."""
    return discretize_scatterer(ShapeSpec(a=1.0, b=1.0), 128)


@pytest.fixture
def star_curve():
    """Star ellipse (a=1, b=0.5) with 256 nodes."""
    return discretize_scatterer(ShapeSpec(kind="star_ellipse", a=1.0, b=0.5), 256)


@pytest.fixture
def square_proxy():
    """3x3 square proxy around the origin, four 16-node panels per side."""
    return discretize_proxy(
        RectProxySpec(width=3.0, height=3.0, panels_horizontal=4, panels_vertical=4)
    )
