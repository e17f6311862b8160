"""Tests for scattering-matrix construction."""

import numpy as np
import pytest

from proxyscat.core.exceptions import DimensionError, GeometryError
from proxyscat.features.geom.curves import discretize_proxy
from proxyscat.features.geom.schemas import RectProxySpec
from proxyscat.features.layered.context import layered_kernel_context
from proxyscat.features.potentials.combined import eval_scattered, solve_combined_field
from proxyscat.features.potentials.kernels import free_kernel_matrix
from proxyscat.features.scatmat.builder import build_scattering_matrix


def point_source_data(k, source, curve):
    """(g, dg/dn) of a point source at the curve nodes."""
    u = free_kernel_matrix("S", k, curve.nodes, [source])[:, 0]
    dudn = free_kernel_matrix("S'", k, curve.nodes, [source], target_normals=curve.normals)[:, 0]
    return u, dudn


class TestPointSourceOracle:
    """A applied to incoming data equals a direct scattering solve."""

    def test_matches_direct_solve(self, pair_factory):
        """Unit circle in a 3x3 proxy, k = 2 pi, n_p = 160: agreement to 1e-9."""
        k, source = 2 * np.pi, (3.0, 1.0)
        scatterer, proxy = pair_factory(n=128, panels=2, order=20)
        assert proxy.n == 160
        matrix = build_scattering_matrix(scatterer, proxy, k)

        u, dudn = point_source_data(k, source, proxy)
        s = np.sqrt(np.concatenate((proxy.weights, proxy.weights)))
        outgoing = matrix.apply(s * np.concatenate((u, dudn))) / s

        sigma = solve_combined_field(scatterer, k, point_source_data(k, source, scatterer)[0])
        direct = eval_scattered(scatterer, sigma, proxy.nodes, k, normals=proxy.normals)
        expected = np.concatenate((direct.values, direct.normal_derivatives))

        assert np.max(np.abs(outgoing - expected)) <= 1e-9 * np.max(np.abs(expected))

    def test_unscaled_entries_act_on_raw_data(self, small_pair):
        """W^{-1/2} A W^{1/2} applied to raw data equals the scaled path."""
        k = 1.0
        scatterer, proxy = small_pair
        matrix = build_scattering_matrix(scatterer, proxy, k)
        raw = np.concatenate(point_source_data(k, (2.5, -2.0), proxy))
        s = matrix.sqrt_weights

        np.testing.assert_allclose(
            matrix.unscaled_entries() @ raw, matrix.apply(s * raw) / s, atol=1e-12
        )


class TestBuildMethods:
    """Composition and literal column construction."""

    def test_columns_match_composition(self, small_pair):
        """Both methods agree to 1e-12 relative."""
        scatterer, proxy = small_pair
        composed = build_scattering_matrix(scatterer, proxy, 1.5)
        columns = build_scattering_matrix(scatterer, proxy, 1.5, method="columns")

        scale = np.max(np.abs(composed.entries))
        np.testing.assert_allclose(columns.entries, composed.entries, atol=1e-12 * scale)

    def test_deterministic(self, small_pair):
        """Two builds give identical entries."""
        scatterer, proxy = small_pair

        a = build_scattering_matrix(scatterer, proxy, 2.0)
        b = build_scattering_matrix(scatterer, proxy, 2.0)

        np.testing.assert_array_equal(a.entries, b.entries)
        assert a.provenance == b.provenance

    def test_linear(self, small_pair):
        """Zero maps to zero and sums map to sums."""
        scatterer, proxy = small_pair
        matrix = build_scattering_matrix(scatterer, proxy, 2.0)
        rng = np.random.default_rng(1)
        x = rng.standard_normal(2 * proxy.n) + 0j
        y = rng.standard_normal(2 * proxy.n) + 0j

        np.testing.assert_array_equal(matrix.apply(np.zeros(2 * proxy.n)), 0)
        scale = np.abs(matrix.entries).max()
        np.testing.assert_allclose(
            matrix.apply(x + y), matrix.apply(x) + matrix.apply(y), atol=1e-13 * scale
        )

    def test_unit_vector_gives_column(self, small_pair):
        """A e_j is column j."""
        scatterer, proxy = small_pair
        matrix = build_scattering_matrix(scatterer, proxy, 2.0)
        e = np.zeros(2 * proxy.n, dtype=complex)
        e[5] = 1.0

        np.testing.assert_array_equal(matrix.apply(e), matrix.entries[:, 5])

    def test_apply_dimension_mismatch(self, small_pair):
        """Wrong data length raises DimensionError."""
        matrix = build_scattering_matrix(*small_pair, 2.0)

        with pytest.raises(DimensionError):
            matrix.apply(np.ones(3))

    def test_resolution_estimate_drops_with_refinement(self, pair_factory):
        """Finer scatterer grids leave less trailing Fourier content."""
        coarse = build_scattering_matrix(*pair_factory(n=32), 1.0)
        fine = build_scattering_matrix(*pair_factory(n=128), 1.0)

        assert fine.resolution_estimate < 1e-3 * coarse.resolution_estimate


class TestGeometryChecks:
    """Enclosure precondition."""

    def test_proxy_must_enclose(self, small_pair):
        """A proxy cutting through the scatterer is rejected."""
        scatterer, _ = small_pair
        tight = discretize_proxy(RectProxySpec(width=1.5, height=3.0))

        with pytest.raises(GeometryError):
            build_scattering_matrix(scatterer, tight, 1.0)


class TestLayeredMatrix:
    """Scattering matrices in the two-layer medium."""

    def test_equal_wavenumbers_reduce_to_free_space(self, pair_factory):
        """With k_minus = k_plus the layered matrix equals the free one."""
        scatterer, proxy = pair_factory(center=(0.0, 3.0))
        ctx = layered_kernel_context(2.0, 2.0, [proxy], tol=1e-12)

        layered = build_scattering_matrix(scatterer, proxy, ctx)
        free = build_scattering_matrix(scatterer, proxy, 2.0)

        assert layered.medium == "layered"
        assert layered.wavenumbers == (2.0, 2.0)
        np.testing.assert_allclose(layered.entries, free.entries, atol=1e-10)

    def test_correction_decays_with_height(self, pair_factory):
        """Raising the obstacle moves its matrix toward the free-space matrix."""
        k_plus, k_minus = np.pi, 1.3 * np.pi
        free = build_scattering_matrix(*pair_factory(), k_plus).entries
        gaps = []
        for height in (2.0, 4.0, 8.0):
            scatterer, proxy = pair_factory(center=(0.0, height))
            ctx = layered_kernel_context(k_plus, k_minus, [proxy], tol=1e-10)
            gaps.append(np.abs(build_scattering_matrix(scatterer, proxy, ctx).entries - free).max())

        assert gaps[0] > gaps[1] > gaps[2]
