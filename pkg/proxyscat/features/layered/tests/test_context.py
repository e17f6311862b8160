"""Tests for geometry-sized layered contexts."""

import numpy as np
import pytest

from proxyscat.core.exceptions import ConfigError, GeometryError
from proxyscat.features.geom.curves import discretize_proxy
from proxyscat.features.geom.schemas import RectProxySpec
from proxyscat.features.layered.context import GeometryExtent, layered_kernel_context


@pytest.fixture
def raised_proxies():
    """Two proxies above the interface, the lower one starting at height 1."""
    return [
        discretize_proxy(RectProxySpec(center=(0.0, 2.0), width=2.0, height=2.0)),
        discretize_proxy(RectProxySpec(center=(3.0, 2.5), width=2.0, height=2.0)),
    ]


class TestLayeredKernelContext:
    """Tests for layered_kernel_context."""

    def test_delta_defaults_to_lowest_source(self, raised_proxies):
        """delta is the smallest proxy height."""
        ctx = layered_kernel_context(np.pi, 1.3 * np.pi, raised_proxies, tol=1e-8)

        assert ctx.layered is not None
        assert ctx.layered.delta == pytest.approx(1.0)
        assert ctx.k == np.pi
        assert ctx.medium == "layered"

    def test_crossing_interface_rejected(self):
        """Sources touching the interface are a geometry error."""
        extent = GeometryExtent(x_min=-1.0, x_max=1.0, min_height=-0.2, max_height=1.0)

        with pytest.raises(GeometryError):
            layered_kernel_context(1.0, 2.0, extent)

    def test_delta_above_sources_rejected(self, raised_proxies):
        """An explicit delta above the lowest source is refused."""
        with pytest.raises(ConfigError):
            layered_kernel_context(1.0, 2.0, raised_proxies, delta=1.5)

    def test_medium_key_tracks_rule(self, raised_proxies):
        """Different accuracy targets give different medium keys."""
        a = layered_kernel_context(1.0, 2.0, raised_proxies, tol=1e-8)
        b = layered_kernel_context(1.0, 2.0, raised_proxies, tol=1e-10)

        assert a.medium_key() != b.medium_key()

    def test_extent_union(self):
        """Union covers both boxes."""
        a = GeometryExtent(0.0, 1.0, 1.0, 2.0)
        b = GeometryExtent.from_points([[-2.0, -1.0], [0.5, 0.5]])

        assert a.union(b) == GeometryExtent(-2.0, 1.0, -1.0, 2.0)
