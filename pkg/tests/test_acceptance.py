"""Convergence trends and shipped-manifest runs at desk scale.

These take minutes; deselect with -m "not slow".
"""

import numpy as np
import pandas as pd
import pytest

from proxyscat.features.cli.service import cmd_convergence, cmd_fieldgrid, cmd_solve

pytestmark = pytest.mark.slow

TREND_BUDGETS = [64, 96, 128]
FLOOR = 1e-9


def errors_by_budget(frame: pd.DataFrame, budgets: list[int]) -> np.ndarray:
    """epsilon as a (budget, sweep value) array; rows come value-major from the sweep."""
    return frame["epsilon"].to_numpy().reshape(-1, len(budgets)).T


def assert_increasing(eps: np.ndarray) -> None:
    """Consecutive errors increase wherever either one is above the floor."""
    for lo, hi in zip(eps[:-1], eps[1:], strict=True):
        if max(lo, hi) > FLOOR:
            assert lo < hi


def run_sweep(config, out_dir, n_p_values=None):
    """Run a convergence sweep, optionally on fewer budgets, and read its table."""
    if n_p_values is not None:
        sweep = config.sweep.model_copy(update={"n_p_values": n_p_values})
        config = config.model_copy(update={"sweep": sweep})
    result = cmd_convergence(config, out_dir)
    return result, pd.read_csv(result.outputs["convergence"])


class TestConvergenceTrends:
    """Error against the monolithic reference for the two-ellipse sweeps."""

    def test_error_decays_with_n_p(self, shipped_config, out_dir):
        """At k = 2 pi the error falls with n_p to below 1e-9."""
        config = shipped_config("two_ellipse_sweep_k")
        sweep = config.sweep.model_copy(update={"values": [2 * np.pi]})
        _, frame = run_sweep(config.model_copy(update={"sweep": sweep}), out_dir)

        eps = frame["epsilon"].to_numpy()
        assert eps[0] > eps[-1]
        # monotone until the obstacle discretization floor
        above_floor = eps[:-1] > FLOOR
        assert np.all(np.diff(eps)[above_floor] < 0)
        assert eps.min() < FLOOR

    def test_error_grows_with_wavenumber(self, shipped_config, out_dir):
        """At a fixed budget, higher k means larger error."""
        _, frame = run_sweep(shipped_config("two_ellipse_sweep_k"), out_dir, TREND_BUDGETS)

        for eps in errors_by_budget(frame, TREND_BUDGETS):
            assert_increasing(eps)

    def test_error_grows_as_gap_shrinks(self, shipped_config, out_dir):
        """Closer proxies need more nodes for the same accuracy."""
        _, frame = run_sweep(shipped_config("two_ellipse_sweep_d"), out_dir, TREND_BUDGETS)

        for eps in errors_by_budget(frame, TREND_BUDGETS):
            assert_increasing(eps[::-1])

    def test_required_n_p_ordering(self, shipped_config, out_dir):
        """The budget that reaches 1e-6 does not shrink as k grows."""
        result, _ = run_sweep(shipped_config("two_ellipse_sweep_k"), out_dir)

        required = list(result.metrics["required_n_p"].values())
        reached = [n for n in required if n is not None]
        assert reached == sorted(reached)
        assert required[0] is not None

    def test_aspect_sweep_runs(self, shipped_config, out_dir):
        """The aspect-ratio sweep produces one row per value and budget."""
        result, frame = run_sweep(shipped_config("two_ellipse_sweep_a"), out_dir, TREND_BUDGETS)

        assert result.metrics["points"] == 9
        assert set(frame["value"]) == {2.0, 4.0, 8.0}
        assert np.isfinite(frame["epsilon"]).all()


class TestShippedSolves:
    """The multi-particle manifests run end to end."""

    def test_photonic_sub_lattice(self, shipped_config, out_dir):
        """25 star ellipses share one scattering matrix and agree with a refined run."""
        config = shipped_config("photonic_5x5")
        result = cmd_solve(config, out_dir, threads=2)

        assert result.metrics["particles"] == 25
        assert result.metrics["distinct_matrices"] == 1
        assert result.metrics["error_estimate"]["value"] < 1e-4
        assert result.metrics["final_residual"] <= config.solver.gmres_tol

    def test_photonic_field_grid(self, shipped_config, out_dir):
        """fieldgrid writes one row per grid point after a solve."""
        config = shipped_config("photonic_5x5")
        cmd_solve(config, out_dir)
        result = cmd_fieldgrid(config, out_dir)

        frame = pd.read_csv(result.outputs["field"])
        assert len(frame) == 61 * 71
        assert frame["mask"].any()

    def test_layered_array(self, shipped_config, out_dir):
        """Eight obstacles above the interface converge to the requested tolerance."""
        config = shipped_config("layered_8")
        result = cmd_solve(config, out_dir, threads=2)

        assert result.metrics["particles"] == 8
        assert result.metrics["final_residual"] <= config.solver.gmres_tol
        frame = pd.read_csv(result.outputs["field"])
        assert np.isfinite(frame.loc[frame["mask"] == 0, "abs_utot"]).all()
