"""Tests for library configuration."""

from pathlib import Path

import pytest
from pydantic import ValidationError

from proxyscat.core.config import Settings, get_settings


class TestDefaults:
    """Values without any PROXYSCAT_* overrides."""

    def test_settings_has_defaults(self, monkeypatch):
        """Settings should have sensible defaults."""
        for name in ("THREADS", "LOG_LEVEL", "LOG_FORMAT", "ARTIFACTS_DIR"):
            monkeypatch.delenv(f"PROXYSCAT_{name}", raising=False)

        settings = Settings()

        assert settings.threads == 1
        assert settings.log_level == "INFO"
        assert settings.log_format == "json"
        assert settings.artifacts_dir == Path("artifacts")
        assert settings.transfer_dense_max_proxies == 16
        assert settings.sommerfeld_default_tol <= settings.gmres_default_tol

    def test_get_settings_returns_singleton(self):
        """get_settings should return cached singleton."""
        assert get_settings() is get_settings()


class TestOverrides:
    """Environment overrides and their validation."""

    def test_threads_from_environment(self, monkeypatch):
        """PROXYSCAT_THREADS should populate the threads setting."""
        monkeypatch.setenv("PROXYSCAT_THREADS", "4")

        assert Settings().threads == 4

    def test_threads_must_be_positive(self, monkeypatch):
        """A zero thread count is rejected."""
        monkeypatch.setenv("PROXYSCAT_THREADS", "0")

        with pytest.raises(ValidationError):
            Settings()

    def test_artifacts_dir_is_stripped(self, monkeypatch):
        """Surrounding whitespace is dropped from the artifacts directory."""
        monkeypatch.setenv("PROXYSCAT_ARTIFACTS_DIR", "  out/runs ")

        assert Settings().artifacts_dir == Path("out/runs")

    def test_blank_artifacts_dir_rejected(self):
        """artifacts_dir cannot be blank."""
        with pytest.raises(ValidationError):
            Settings(artifacts_dir="   ")

    def test_sommerfeld_tolerance_above_gmres_rejected(self):
        """Sommerfeld integrals coarser than the GMRES tolerance are rejected."""
        with pytest.raises(ValidationError, match="sommerfeld_default_tol"):
            Settings(gmres_default_tol=1e-12, sommerfeld_default_tol=1e-8)
