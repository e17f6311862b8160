"""Fixtures for core tests."""

import pytest

from proxyscat.core.config import get_settings


@pytest.fixture(autouse=True)
def _clear_settings_cache():
    """Reset the cached settings around each test."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()
