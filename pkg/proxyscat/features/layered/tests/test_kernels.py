"""Tests for the interface corrections s_plus and s_minus."""

import numpy as np
import pytest

from proxyscat.core.exceptions import DomainError
from proxyscat.features.layered.far import sommerfeld_far_apply
from proxyscat.features.potentials.kernels import (
    LayerKind,
    free_kernel_matrix,
    gk,
    gk_gradient_x,
)


class TestDegenerateMedium:
    """Equal wavenumbers reduce the layered kernel to free space."""

    def test_reflection_vanishes(self, degenerate_context):
        """s_plus is identically zero when k_plus = k_minus."""
        value = degenerate_context.s_plus((0.1, 0.8), (-0.4, 1.1))

        assert value.value == 0
        np.testing.assert_array_equal(value.grad_x, 0)

    def test_transmission_is_free_space(self, degenerate_context):
        """s_minus equals g_k below the interface."""
        x, y = (0.3, -0.7), (-0.5, 1.2)

        value = degenerate_context.s_minus(x, y)

        assert value.value == pytest.approx(gk(2.0, x, y), abs=1e-10)
        np.testing.assert_allclose(value.grad_x, gk_gradient_x(2.0, x, y), atol=1e-9)


class TestInterfaceConditions:
    """Continuity of the layered Green's function across x2 = 0."""

    def test_value_and_normal_derivative_continuous(self, context_factory):
        """g + s_plus and s_minus agree in value and d/dx2 at 100 random interface points."""
        tol = 1e-8
        ctx = context_factory(np.pi, 1.3 * np.pi, tol=tol)
        rng = np.random.default_rng(7)
        targets = np.column_stack((rng.uniform(-3.0, 3.0, 100), np.zeros(100)))
        sources = np.array([[0.2, 0.5], [-1.0, 1.3], [0.9, 2.4]])
        up = np.tile([0.0, 1.0], (100, 1))

        free = free_kernel_matrix(LayerKind.S, ctx.k_plus, targets, sources)
        free_dx2 = free_kernel_matrix(
            LayerKind.SP, ctx.k_plus, targets, sources, target_normals=up
        )
        above = ctx.spectral_matrix("upper", targets, sources)
        above_dx2 = ctx.spectral_matrix("upper", targets, sources, target_normals=up)
        below = ctx.spectral_matrix("lower", targets, sources)
        below_dx2 = ctx.spectral_matrix("lower", targets, sources, target_normals=up)

        assert np.max(np.abs(free + above - below)) <= 10 * tol
        assert np.max(np.abs(free_dx2 + above_dx2 - below_dx2)) <= 10 * tol

    def test_reciprocity(self, contrast_context):
        """s_plus(x, y) = s_plus(y, x) for two points above delta."""
        x, y = (0.4, 0.9), (-1.1, 1.7)

        assert contrast_context.s_plus(x, y).value == pytest.approx(
            contrast_context.s_plus(y, x).value, abs=1e-12
        )

    def test_refinement_changes_little(self, context_factory):
        """Halving panels and extending the truncation moves s_plus below 1e-10."""
        base = context_factory(np.pi, 1.3 * np.pi)
        fine = context_factory(
            np.pi, 1.3 * np.pi, panel_scale=0.5, xi_max=base.rule.xi_max * 1.5
        )
        x, y = (0.5, 0.6), (-0.8, 1.3)

        assert fine.s_plus(x, y).value == pytest.approx(base.s_plus(x, y).value, abs=1e-10)


class TestHeightRules:
    """Height preconditions of the corrections."""

    def test_source_below_delta_rejected(self, contrast_context):
        """Sources must sit at least delta above the interface."""
        with pytest.raises(DomainError):
            contrast_context.s_plus((0.0, 1.0), (0.0, 0.1))

    def test_target_on_wrong_side_rejected(self, contrast_context):
        """s_minus needs x2 <= 0."""
        with pytest.raises(DomainError):
            contrast_context.s_minus((0.0, 0.5), (0.0, 1.0))


class TestCorrectionMatrix:
    """Tests for matrix assembly and far application."""

    def test_matrix_rows_follow_sides(self, contrast_context):
        """Rows above use s_plus and rows below s_minus."""
        targets = np.array([[0.1, 0.6], [0.3, -0.4]])
        sources = np.array([[0.0, 1.0]])

        mat = contrast_context.correction_matrix(LayerKind.S, targets, sources)

        assert mat[0, 0] == pytest.approx(contrast_context.s_plus(targets[0], sources[0]).value)
        assert mat[1, 0] == pytest.approx(contrast_context.s_minus(targets[1], sources[0]).value)

    def test_far_apply_matches_pairwise(self, contrast_context):
        """The spectral sum agrees with the pairwise double/single layer sum."""
        rng = np.random.default_rng(5)
        sources = np.column_stack((rng.uniform(-2, 2, 40), rng.uniform(0.5, 2.5, 40)))
        angles = rng.uniform(0, 2 * np.pi, 40)
        normals = np.column_stack((np.cos(angles), np.sin(angles)))
        weights = rng.uniform(0.01, 0.1, 40)
        mu = rng.standard_normal(40) + 1j * rng.standard_normal(40)
        rho = rng.standard_normal(40) + 1j * rng.standard_normal(40)
        targets = np.column_stack((rng.uniform(-2, 2, 7), rng.uniform(0.5, 2.5, 7)))
        target_normals = np.tile((0.0, 1.0), (7, 1))

        far = sommerfeld_far_apply(
            contrast_context, sources, normals, weights, mu, rho, targets, target_normals
        )

        d = contrast_context.correction_matrix(LayerKind.D, targets, sources, None, normals)
        s = contrast_context.correction_matrix(LayerKind.S, targets, sources)
        dp = contrast_context.correction_matrix(LayerKind.DP, targets, sources, target_normals, normals)
        sp = contrast_context.correction_matrix(LayerKind.SP, targets, sources, target_normals)
        np.testing.assert_allclose(far.values, d @ (weights * mu) - s @ (weights * rho), atol=1e-12)
        np.testing.assert_allclose(
            far.normal_derivatives, dp @ (weights * mu) - sp @ (weights * rho), atol=1e-11
        )

    def test_far_apply_requires_heights(self, contrast_context):
        """Targets below delta are refused."""
        with pytest.raises(DomainError):
            sommerfeld_far_apply(
                contrast_context,
                [[0.0, 1.0]],
                [[0.0, 1.0]],
                [0.1],
                np.ones(1),
                np.ones(1),
                [[0.0, 0.1]],
            )
