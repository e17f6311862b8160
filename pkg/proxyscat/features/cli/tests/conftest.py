"""Fixtures for command-line tests."""

import copy

import numpy as np
import pytest
import yaml

from proxyscat.core.config import get_settings
from proxyscat.features.cli.schemas import RunConfig


def probe_ring(radius, count=20, center=(0.0, 0.0), phase=0.3):
    """count points on a circle, as [x1, x2] lists."""
    t = phase + 2 * np.pi * np.arange(count) / count
    return [
        [float(center[0] + radius * np.cos(s)), float(center[1] + radius * np.sin(s))] for s in t
    ]


def disk_manifest():
    """Unit disk at k = 2 pi in a 3x3 proxy with n_p = 160."""
    probes = [p for r in (3.0, 5.0, 10.0) for p in probe_ring(r, count=7)]
    return {
        "name": "disk",
        "medium": {"kind": "free", "k": float(2 * np.pi)},
        "incident": {"kind": "plane_wave", "angle": 0.0},
        "geometry": {"kind": "disk", "radius": 1.0},
        "proxy": {"margin": 0.5, "panels_horizontal": 2, "panels_vertical": 2, "panel_order": 20},
        "discretization": {"n": 128},
        "solver": {"gmres_tol": 1e-12},
        "output": {
            "probes": probes,
            "grid": {"x_min": -3.0, "x_max": 3.0, "y_min": -3.0, "y_max": 3.0, "nx": 7, "ny": 7},
        },
    }


def two_disk_manifest():
    """Two small disks at k = pi with square proxies of n_p = 128."""
    return {
        "name": "two-disks",
        "medium": {"kind": "free", "k": float(np.pi)},
        "geometry": {
            "kind": "shapes",
            "shapes": [
                {"a": 0.5, "b": 0.5, "center": [-1.5, 0.0]},
                {"a": 0.5, "b": 0.5, "center": [1.5, 0.0]},
            ],
        },
        "proxy": {"margin": 0.5, "panels_horizontal": 2, "panels_vertical": 2},
        "discretization": {"n": 64},
        "solver": {"gmres_tol": 1e-12},
        "output": {"probes": probe_ring(5.0, count=12)},
    }


@pytest.fixture(autouse=True)
def _clear_settings_cache():
    """Reset the cached settings around each test."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def disk_data():
    """Mutable copy of the disk manifest."""
    return copy.deepcopy(disk_manifest())


@pytest.fixture
def two_disk_data():
    """Mutable copy of the two-disk manifest."""
    return copy.deepcopy(two_disk_manifest())


@pytest.fixture
def disk_config(disk_data):
    """Validated disk manifest."""
    return RunConfig.model_validate(disk_data)


@pytest.fixture
def two_disk_config(two_disk_data):
    """Validated two-disk manifest."""
    return RunConfig.model_validate(two_disk_data)


@pytest.fixture
def write_manifest(tmp_path):
    """Write a manifest mapping to a YAML file and return its path."""

    def _write(data, name="run.yaml"):
        path = tmp_path / name
        path.write_text(yaml.safe_dump(data, sort_keys=False), encoding="utf-8")
        return path

    return _write


@pytest.fixture
def out_dir(tmp_path):
    """Empty output directory."""
    path = tmp_path / "out"
    path.mkdir()
    return path
