"""High-precision reference table for J_n and Y_n.

The table is plain text, one record per line: ``n x re_J re_Y`` with 20
significant digits. It is produced with mpmath at extended working precision
(scripts/make_bessel_table.py) and read back by the test suite.
"""

from __future__ import annotations

import os
import tempfile
from collections.abc import Iterable
from dataclasses import dataclass
from pathlib import Path

import structlog

from proxyscat.core.exceptions import FormatError

logger = structlog.get_logger()

DEFAULT_ORDERS: tuple[int, ...] = (0, 1, 2, 5, 10, 20, 50, 100, 200)
DEFAULT_ARGUMENTS: tuple[float, ...] = (1e-3, 0.1, 0.5, 1.0, 5.0, 10.0, 50.0, 100.0, 1e3, 1e4)

# Records outside this magnitude window are skipped (not representable as doubles)
_MAX_MAGNITUDE = 1e290
_MIN_MAGNITUDE = 1e-290


@dataclass(frozen=True)
class ReferenceValue:
    """One table record."""

    n: int
    x: float
    j: float
    y: float


def compute_reference_values(
    orders: Iterable[int] = DEFAULT_ORDERS,
    arguments: Iterable[float] = DEFAULT_ARGUMENTS,
    dps: int = 60,
) -> list[tuple[int, float, str, str]]:
    """Evaluate J_n(x), Y_n(x) with mpmath.

    Args:
        orders: Integer orders.
        arguments: Positive arguments (exactly representable doubles).
        dps: Decimal working precision.

    Returns:
        Tuples (n, x, J as 20-digit string, Y as 20-digit string).
    """
    import mpmath  # type: ignore[import-untyped]  # dev-only dependency

    records: list[tuple[int, float, str, str]] = []
    with mpmath.workdps(dps):
        for n in orders:
            for x in arguments:
                xm = mpmath.mpf(x)
                j = mpmath.besselj(n, xm)
                y = mpmath.bessely(n, xm)
                if not (_MIN_MAGNITUDE < abs(j) < _MAX_MAGNITUDE):
                    continue
                if not (_MIN_MAGNITUDE < abs(y) < _MAX_MAGNITUDE):
                    continue
                records.append((n, x, mpmath.nstr(j, 20), mpmath.nstr(y, 20)))
    return records


def write_reference_table(path: str | Path, records: Iterable[tuple[int, float, str, str]]) -> Path:
    """Write records atomically.

    Args:
        path: Destination file.
        records: Output of compute_reference_values.

    Returns:
        The written path.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"{n} {x!r} {j} {y}\n" for n, x, j, y in records]
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".bessel", suffix=".tmp")
    with os.fdopen(fd, "w", encoding="utf-8") as fh:
        fh.writelines(lines)
    Path(tmp).replace(path)
    logger.info("specfun.reference_table_written", path=str(path), records=len(lines))
    return path


def read_reference_table(path: str | Path) -> list[ReferenceValue]:
    """Parse a reference table.

    Raises:
        FormatError: If a line does not have four fields.
    """
    values: list[ReferenceValue] = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 4:
            raise FormatError(
                "Reference table line must have 4 fields",
                details={"path": str(path), "line": lineno},
            )
        values.append(ReferenceValue(int(parts[0]), float(parts[1]), float(parts[2]), float(parts[3])))
    return values
