"""Fixtures for multi-particle tests."""

import numpy as np
import pytest

from proxyscat.features.geom.schemas import RectProxySpec, ShapeSpec
from proxyscat.features.multiscat.incident import PlaneWave
from proxyscat.features.multiscat.system import assemble_system, build_layout


def disk_layout(
    k=np.pi,
    centers=((-1.5, 0.0), (1.5, 0.0)),
    radius=0.5,
    side=2.0,
    panels=2,
    order=16,
    n=64,
    incident=None,
):
    """Disks of equal radius, each in a square proxy, hit by a plane wave."""
    shapes = [ShapeSpec(a=radius, b=radius, center=c) for c in centers]
    proxies = [
        RectProxySpec(
            center=c,
            width=side,
            height=side,
            panels_horizontal=panels,
            panels_vertical=panels,
            panel_order=order,
        )
        for c in centers
    ]
    return build_layout(shapes, proxies, n, k, incident or PlaneWave(k))


@pytest.fixture
def layout_factory():
    """Builder for disk layouts."""
    return disk_layout


@pytest.fixture
def two_disk_system():
    """Two disks of radius 0.5 at (+-1.5, 0), k = pi, n_p = 128 per proxy."""
    return assemble_system(disk_layout())


@pytest.fixture
def single_disk_system():
    """Unit disk in a 3x3 proxy with n_p = 160, k = 2 pi."""
    k = 2 * np.pi
    return assemble_system(
        disk_layout(k=k, centers=((0.0, 0.0),), radius=1.0, side=3.0, order=20, n=128)
    )


def probe_ring(radius, count=20, center=(0.0, 0.0)):
    """Equally spaced points on a circle."""
    t = 2 * np.pi * np.arange(count) / count + 0.1
    return np.column_stack((center[0] + radius * np.cos(t), center[1] + radius * np.sin(t)))


@pytest.fixture
def probes():
    """Builder for probe rings."""
    return probe_ring
