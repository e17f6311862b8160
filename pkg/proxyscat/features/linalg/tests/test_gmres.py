"""Tests for the GMRES solver."""

import numpy as np
import pytest
from scipy.sparse.linalg import LinearOperator

from proxyscat.core.exceptions import ConvergenceError
from proxyscat.features.linalg import gmres, lu_solve


class TestGMRESConvergence:
    """Tests for GMRES convergence behaviour."""

    def test_identity_converges_in_one_iteration(self):
        """The identity operator converges after a single Arnoldi step."""
        b = np.array([1.0, 2.0, 3.0 + 1j])

        result = gmres(np.eye(3), b, tol=1e-12)

        assert result.converged
        assert result.iterations == 1
        np.testing.assert_allclose(result.x, b, atol=1e-14)

    def test_three_distinct_eigenvalues(self, rng):
        """A diagonal operator with three eigenvalues needs at most three steps."""
        diag = np.repeat([1.0, 2.5, -0.7 + 1j], 10)
        b = rng.standard_normal(30) + 1j * rng.standard_normal(30)

        result = gmres(np.diag(diag), b, tol=1e-12)

        assert result.converged
        assert result.iterations <= 3
        np.testing.assert_allclose(result.x, b / diag, rtol=1e-10)

    def test_matches_lu_oracle(self, rng, well_conditioned_matrix):
        """GMRES and LU agree on a random well-conditioned system."""
        b = rng.standard_normal(100) + 1j * rng.standard_normal(100)

        result = gmres(well_conditioned_matrix, b, tol=1e-13, max_iter=200)
        reference = lu_solve(well_conditioned_matrix, b)

        assert np.linalg.norm(result.x - reference) <= 1e-10 * np.linalg.norm(reference)

    def test_residual_history_non_increasing(self, rng, well_conditioned_matrix):
        """The recorded residuals never increase."""
        b = rng.standard_normal(100)

        result = gmres(well_conditioned_matrix, b, tol=1e-12, max_iter=200)
        history = np.array(result.residual_history)

        assert history[0] == pytest.approx(1.0)
        assert np.all(np.diff(history) <= 1e-14)

    def test_linear_operator_and_callable(self, rng, well_conditioned_matrix):
        """LinearOperator and plain callables are accepted."""
        b = rng.standard_normal(100)
        op = LinearOperator((100, 100), matvec=lambda v: well_conditioned_matrix @ v, dtype=complex)

        via_op = gmres(op, b, tol=1e-12, max_iter=200)
        via_callable = gmres(lambda v: well_conditioned_matrix @ v, b, tol=1e-12, max_iter=200)

        np.testing.assert_allclose(via_op.x, via_callable.x, atol=1e-12)

    def test_restarted_solve_converges(self, rng, well_conditioned_matrix):
        """A restarted solve still converges and counts its restarts."""
        b = rng.standard_normal(100)

        result = gmres(well_conditioned_matrix, b, tol=1e-10, max_iter=400, restart=5)

        assert result.converged
        assert result.restarts >= 1
        assert np.linalg.norm(well_conditioned_matrix @ result.x - b) <= 1e-9 * np.linalg.norm(b)

    def test_zero_rhs(self):
        """A zero right-hand side returns zero without iterating."""
        result = gmres(np.eye(4), np.zeros(4))

        assert result.iterations == 0
        assert not np.any(result.x)


class TestGMRESFailure:
    """Tests for GMRES error reporting."""

    def test_non_convergence_carries_history(self, rng):
        """Exceeding max_iter raises with the residual history attached."""
        n = 60
        a = np.diag(np.linspace(1.0, 1e4, n))
        b = rng.standard_normal(n)

        with pytest.raises(ConvergenceError) as exc_info:
            gmres(a, b, tol=1e-14, max_iter=3)

        history = exc_info.value.details["residual_history"]
        assert len(history) == 4
        assert history[-1] > 1e-14
