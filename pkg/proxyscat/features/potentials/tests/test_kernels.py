"""Tests for free-space kernels and the kernel context."""

import numpy as np
import pytest

from proxyscat.core.exceptions import ConfigError, DomainError
from proxyscat.features.potentials.kernels import (
    KernelContext,
    LayerKind,
    MediumCorrection,
    free_kernel_matrix,
    gk,
    gk_gradient_x,
    gk_gradient_y,
    gk_mixed_normal,
    kernel_matrix,
)
from proxyscat.features.specfun.bessel import hankel1


class ConstantCorrection:
    """Medium correction returning a constant matrix, for dispatch tests."""

    k_plus = 2.0
    k_minus = 3.0

    def correction_matrix(self, kind, targets, sources, target_normals=None, source_normals=None):
        return np.full((len(targets), len(sources)), 1.0 + 0j)

    def medium_key(self):
        return "constant"


class TestGreenFunction:
    """Tests for g_k and its derivatives."""

    def test_value_matches_hankel(self):
        """g_k(x, y) = (i/4) H_0(k r)."""
        assert gk(2.0, (0.0, 0.0), (3.0, 4.0)) == pytest.approx(0.25j * hankel1(0, 10.0), rel=1e-15)

    def test_symmetric(self):
        """g_k is symmetric in its arguments."""
        assert gk(1.5, (0.1, 0.2), (-0.3, 0.7)) == gk(1.5, (-0.3, 0.7), (0.1, 0.2))

    def test_coincident_points_raise(self):
        """The kernel is singular at r = 0."""
        with pytest.raises(DomainError):
            free_kernel_matrix("S", 1.0, [(0.5, 0.5)], [(0.5, 0.5)])

    def test_gradients_match_finite_differences(self):
        """Analytic gradients agree with centered differences."""
        k, x, y, h = 3.0, np.array([0.4, -0.2]), np.array([-0.5, 0.6]), 1e-5
        fd_y = [(gk(k, x, y + h * e) - gk(k, x, y - h * e)) / (2 * h) for e in np.eye(2)]
        fd_x = [(gk(k, x + h * e, y) - gk(k, x - h * e, y)) / (2 * h) for e in np.eye(2)]

        np.testing.assert_allclose(gk_gradient_y(k, x, y), fd_y, rtol=1e-8)
        np.testing.assert_allclose(gk_gradient_x(k, x, y), fd_x, rtol=1e-8)

    def test_gradients_are_opposite(self):
        """grad_x g = -grad_y g for a translation-invariant kernel."""
        np.testing.assert_allclose(
            gk_gradient_x(2.0, (0.0, 1.0), (1.0, 0.0)),
            -gk_gradient_y(2.0, (0.0, 1.0), (1.0, 0.0)),
            rtol=1e-14,
        )

    def test_mixed_derivative_matches_finite_difference(self):
        """D' kernel agrees with differencing the D kernel in the target normal."""
        k, x, y, h = 2.5, np.array([0.3, 0.1]), np.array([-0.4, 0.9]), 1e-5
        nx = np.array([0.6, 0.8])
        ny = np.array([1.0, 0.0])

        def d_kernel(point):
            return free_kernel_matrix("D", k, [point], [y], source_normals=[ny])[0, 0]

        fd = (d_kernel(x + h * nx) - d_kernel(x - h * nx)) / (2 * h)

        assert gk_mixed_normal(k, x, y, nx, ny) == pytest.approx(fd, rel=1e-7)

    def test_missing_normals_is_config_error(self):
        """D needs source normals."""
        with pytest.raises(ConfigError):
            free_kernel_matrix(LayerKind.D, 1.0, [(0.0, 0.0)], [(1.0, 0.0)])


class TestKernelContext:
    """Tests for KernelContext and medium dispatch."""

    def test_rejects_non_positive_wavenumber(self):
        """k must be positive."""
        with pytest.raises(ConfigError):
            KernelContext(k=0.0)

    def test_free_medium_key(self):
        """Free space identifies itself by its wavenumber."""
        ctx = KernelContext(k=2.0)

        assert ctx.medium == "free"
        assert ctx.medium_key() == "free:k=2.0"
        assert ctx.wavenumbers == (2.0,)

    def test_layered_rows_split_at_interface(self):
        """Upper targets get free + correction, lower targets the correction only."""
        correction = ConstantCorrection()
        assert isinstance(correction, MediumCorrection)
        ctx = KernelContext(k=2.0, layered=correction)
        targets = np.array([[0.0, 1.0], [0.0, -1.0]])
        sources = np.array([[1.0, 2.0]])

        mat = kernel_matrix("S", ctx, targets, sources)

        free = free_kernel_matrix("S", 2.0, targets[:1], sources)[0, 0]
        assert mat[0, 0] == pytest.approx(free + 1.0, rel=1e-15)
        assert mat[1, 0] == 1.0
        assert ctx.wavenumbers == (2.0, 3.0)
