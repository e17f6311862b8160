"""Fixtures for specfun tests."""

import pytest

from proxyscat.features.specfun.reference import (
    compute_reference_values,
    read_reference_table,
    write_reference_table,
)

ORACLE_ORDERS = (0, 1, 2, 5, 10, 20, 50, 100, 200)
ORACLE_ARGUMENTS = (1e-3, 0.1, 0.5, 1.0, 5.0, 10.0, 50.0, 100.0, 1e3)


@pytest.fixture(scope="session")
def reference_table(tmp_path_factory):
    """Reference records produced the same way as scripts/make_bessel_table.py."""
    pytest.importorskip("mpmath")
    path = tmp_path_factory.mktemp("oracle") / "bessel_reference.txt"
    write_reference_table(path, compute_reference_values(ORACLE_ORDERS, ORACLE_ARGUMENTS))
    return read_reference_table(path)
