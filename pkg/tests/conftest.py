"""Shared pytest fixtures for the acceptance suite."""

from pathlib import Path

import pytest

from proxyscat.core.config import get_settings
from proxyscat.features.cli.schemas import RunConfig, load_run_config

FIXTURES_DIR = Path(__file__).resolve().parents[1] / "fixtures"


@pytest.fixture(autouse=True)
def _clear_settings_cache():
    """Reset the cached settings around each test."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def shipped_config():
    """Load a manifest from fixtures/ by file stem."""

    def _load(stem: str) -> RunConfig:
        return load_run_config(FIXTURES_DIR / f"{stem}.yaml")

    return _load


@pytest.fixture
def out_dir(tmp_path):
    """Empty output directory."""
    path = tmp_path / "out"
    path.mkdir()
    return path
