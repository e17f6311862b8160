"""Run artifacts: JSON reports and CSV tables, all written atomically."""

from __future__ import annotations

import json
import os
import tempfile
import time
from collections.abc import Iterator
from contextlib import contextmanager
from datetime import datetime
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from proxyscat.core.logging import get_logger
from proxyscat.features.cli.schemas import RunReport
from proxyscat.features.multiscat.field import FieldEvaluation

logger = get_logger(__name__)

FIELD_COLUMNS = ["x1", "x2", "re_usc", "im_usc", "re_utot", "im_utot", "mask", "abs_utot"]
CONVERGENCE_COLUMNS = [
    "parameter",
    "value",
    "n_p",
    "epsilon",
    "iterations",
    "final_residual",
    "solve_seconds",
]


def _atomic_write(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
    return path


def _json_default(value: Any) -> Any:
    if isinstance(value, np.generic | np.ndarray):
        return value.tolist()
    if isinstance(value, datetime):
        return value.isoformat()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def write_report(report: RunReport, path: str | Path) -> Path:
    """Serialize a run report as indented JSON.

    numpy scalars and arrays in metrics or error details become plain JSON values.
    """
    text = json.dumps(report.model_dump(), indent=2, default=_json_default, allow_nan=True)
    path = _atomic_write(Path(path), text)
    logger.info("cli.report_written", path=str(path), status=report.status)
    return path


def field_frame(evaluation: FieldEvaluation) -> pd.DataFrame:
    """Field table; masked rows keep their coordinates and carry NaN fields."""
    return pd.DataFrame(
        {
            "x1": evaluation.points[:, 0],
            "x2": evaluation.points[:, 1],
            "re_usc": evaluation.scattered.real,
            "im_usc": evaluation.scattered.imag,
            "re_utot": evaluation.total.real,
            "im_utot": evaluation.total.imag,
            "mask": evaluation.mask.astype(np.int64),
            "abs_utot": np.abs(evaluation.total),
        },
        columns=FIELD_COLUMNS,
    )


def write_csv(frame: pd.DataFrame, path: str | Path) -> Path:
    """Write a table with full float precision."""
    text = frame.to_csv(index=False, float_format="%.17g", na_rep="NaN")
    path = _atomic_write(Path(path), text)
    logger.info("cli.csv_written", path=str(path), rows=len(frame))
    return path


class PhaseTimer:
    """Wall time per named phase, in seconds."""

    def __init__(self) -> None:
        self.timings: dict[str, float] = {}

    @contextmanager
    def phase(self, name: str) -> Iterator[None]:
        start = time.perf_counter()
        try:
            yield
        finally:
            self.timings[name] = self.timings.get(name, 0.0) + round(
                time.perf_counter() - start, 6
            )
            logger.debug("cli.phase_completed", phase=name, seconds=self.timings[name])


def relative_gap(values: Any, reference: Any, where: Any = None) -> float:
    """max |values - reference| / max |reference| over the selected entries.

    Returns the absolute gap when the reference vanishes there.
    """
    u = np.asarray(values)
    ref = np.asarray(reference)
    if where is not None:
        u, ref = u[np.asarray(where)], ref[np.asarray(where)]
    if u.size == 0:
        return float("nan")
    gap = float(np.abs(u - ref).max())
    scale = float(np.abs(ref).max())
    return gap / scale if scale > 0.0 else gap
