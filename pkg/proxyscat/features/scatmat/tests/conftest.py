"""Fixtures for scattering-matrix tests."""

import pytest

from proxyscat.features.geom.curves import discretize_proxy, discretize_scatterer
from proxyscat.features.geom.schemas import RectProxySpec, ShapeSpec


def circle_in_box(center=(0.0, 0.0), n=64, panels=1, order=16, side=3.0):
    """Unit circle and a square proxy of the given side around it."""
    scatterer = discretize_scatterer(ShapeSpec(a=1.0, b=1.0, center=center), n)
    proxy = discretize_proxy(
        RectProxySpec(
            center=center,
            width=side,
            height=side,
            panels_horizontal=panels,
            panels_vertical=panels,
            panel_order=order,
        )
    )
    return scatterer, proxy


@pytest.fixture
def small_pair():
    """Unit circle with 64 nodes in a 3x3 proxy with 64 nodes."""
    return circle_in_box()


@pytest.fixture
def pair_factory():
    """Builder for circle/proxy pairs."""
    return circle_in_box
