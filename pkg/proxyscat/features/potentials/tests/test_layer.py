"""Tests for layer-potential matrices between curves."""

import numpy as np
import pytest
from scipy.integrate import quad

from proxyscat.core.exceptions import DimensionError, GeometryError
from proxyscat.features.geom.curves import discretize_scatterer
from proxyscat.features.geom.schemas import ShapeSpec
from proxyscat.features.potentials.kernels import LayerKind, free_kernel_matrix, gk
from proxyscat.features.potentials.layer import layer_matrices, layer_matrix, potential_at


def radiating_source(k, z, points, normals):
    """Values and normal derivatives of g(., z)."""
    u = free_kernel_matrix("S", k, points, [z])[:, 0]
    dudn = free_kernel_matrix("S'", k, points, [z], target_normals=normals)[:, 0]
    return u, dudn


class TestLayerMatrix:
    """Tests for layer_matrix."""

    def test_same_curve_rejected(self, circle_curve):
        """Self interactions are refused."""
        with pytest.raises(GeometryError):
            layer_matrix("S", circle_curve, circle_curve, 1.0)

    def test_single_layer_matches_adaptive_quadrature(self, circle_curve):
        """S[1] at an exterior point agrees with adaptive integration."""
        k, x = 1.0, np.array([1.7, 0.4])
        values = potential_at({"S": np.ones(circle_curve.n)}, circle_curve, [x], k)

        def integrand(t, part):
            value = gk(k, x, (np.cos(t), np.sin(t)))
            return value.real if part == "re" else value.imag

        expected = quad(integrand, 0, 2 * np.pi, args=("re",), epsabs=1e-13)[0] + 1j * quad(
            integrand, 0, 2 * np.pi, args=("im",), epsabs=1e-13
        )[0]

        assert values[0] == pytest.approx(expected, abs=1e-10)

    def test_apply_checks_density_length(self, circle_curve, square_proxy):
        """Densities of the wrong length raise DimensionError."""
        mat = layer_matrix("D", circle_curve, square_proxy, 1.0)

        with pytest.raises(DimensionError):
            mat.apply(np.ones(3))

    def test_matrices_share_one_evaluation(self, circle_curve, square_proxy):
        """layer_matrices returns every requested kind with matching shapes."""
        mats = layer_matrices(["S", "D", "S'", "D'"], circle_curve, square_proxy, 2.0)

        assert set(mats) == {LayerKind.S, LayerKind.D, LayerKind.SP, LayerKind.DP}
        assert all(m.shape == (square_proxy.n, circle_curve.n) for m in mats.values())


class TestProxyGreenRepresentation:
    """Green representation on a rectangular proxy."""

    def test_reproduces_radiating_field_outside(self, square_proxy):
        """D[u] - S[du/dn] on the proxy reproduces a field radiated from inside."""
        k, z = 2.0, (0.2, -0.1)
        u, dudn = radiating_source(k, z, square_proxy.nodes, square_proxy.normals)
        targets = np.array([[3.0, 0.5], [-2.5, -2.0], [0.0, 4.0]])

        rep = potential_at({"D": u, "S": -dudn}, square_proxy, targets, k)
        exact = free_kernel_matrix("S", k, targets, [z])[:, 0]

        np.testing.assert_allclose(rep, exact, atol=1e-10 * np.max(np.abs(exact)))

    def test_vanishes_inside(self, square_proxy):
        """The same representation is zero at interior points away from the source."""
        k, z = 2.0, (0.2, -0.1)
        u, dudn = radiating_source(k, z, square_proxy.nodes, square_proxy.normals)
        targets = np.array([[-0.8, 0.8], [0.9, -0.9]])

        rep = potential_at({"D": u, "S": -dudn}, square_proxy, targets, k)

        assert np.max(np.abs(rep)) <= 1e-10

    def test_translated_curve_gives_same_matrix(self):
        """Rigidly translating both curves leaves the matrix unchanged."""
        shape = ShapeSpec(kind="star_ellipse", a=1.0, b=0.5)
        far = shape.translated((4.0, 0.0))
        a = layer_matrix("S", discretize_scatterer(shape, 64), discretize_scatterer(far, 64), 1.5)
        b = layer_matrix(
            "S",
            discretize_scatterer(shape.translated((1.0, 2.0)), 64),
            discretize_scatterer(far.translated((1.0, 2.0)), 64),
            1.5,
        )

        np.testing.assert_allclose(a.entries, b.entries, atol=1e-13)
