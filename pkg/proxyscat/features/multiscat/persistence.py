"""Solution bundles: solved proxy data plus the run configuration that produced it.

A bundle lets fieldgrid evaluate a finished solve without repeating it. On disk
it is a joblib-compressed mapping of plain values (a numpy array, lists, str and
JSON-compatible dicts), so loading never unpickles library classes. The
mapping carries a format tag and version, checked before anything else.
"""

from __future__ import annotations

import hashlib
import json
import platform
from dataclasses import dataclass, field
from datetime import UTC, datetime
from pathlib import Path
from typing import Any

import joblib  # type: ignore[import-untyped]
import numpy as np

from proxyscat.core.exceptions import FormatError
from proxyscat.core.logging import get_logger
from proxyscat.features.multiscat.state import BoundaryState

logger = get_logger(__name__)

BUNDLE_FORMAT = "proxyscat-solution"
BUNDLE_VERSION = 1

_REQUIRED_KEYS = ("data", "block_sizes", "scaled", "config", "report", "provenance", "bundle_hash")


@dataclass
class SolutionBundle:
    """Solved net scattered proxy data with its configuration.

    Attributes:
        state: Weight-scaled solution of the multi-particle system.
        config: Echo of the run configuration (JSON-compatible).
        report: Solve report as a dict.
        provenance: created_at, python and numpy versions, filled on save.
        bundle_hash: Hash of config and solution data, filled on save.
    """

    state: BoundaryState
    config: dict[str, Any]
    report: dict[str, Any] = field(default_factory=lambda: {})
    provenance: dict[str, str] = field(default_factory=lambda: {})
    bundle_hash: str | None = None

    @property
    def created_at(self) -> datetime | None:
        stamp = self.provenance.get("created_at")
        return datetime.fromisoformat(stamp) if stamp else None

    @property
    def numpy_version(self) -> str | None:
        return self.provenance.get("numpy")

    def compute_hash(self) -> str:
        """16-character hash over configuration and solution data."""
        digest = hashlib.sha256(json.dumps(self.config, sort_keys=True, default=str).encode())
        digest.update(np.ascontiguousarray(self.state.data).tobytes())
        digest.update(repr(self.state.block_sizes).encode())
        return digest.hexdigest()[:16]

    def to_payload(self) -> dict[str, Any]:
        return {
            "format": BUNDLE_FORMAT,
            "version": BUNDLE_VERSION,
            "data": np.ascontiguousarray(self.state.data, dtype=np.complex128),
            "block_sizes": list(self.state.block_sizes),
            "scaled": self.state.scaled,
            "config": self.config,
            "report": self.report,
            "provenance": self.provenance,
            "bundle_hash": self.bundle_hash,
        }

    @classmethod
    def from_payload(cls, payload: dict[str, Any]) -> SolutionBundle:
        state = BoundaryState(
            np.asarray(payload["data"], dtype=np.complex128),
            tuple(int(n) for n in payload["block_sizes"]),
            scaled=bool(payload["scaled"]),
        )
        return cls(
            state=state,
            config=dict(payload["config"]),
            report=dict(payload["report"]),
            provenance=dict(payload["provenance"]),
            bundle_hash=payload["bundle_hash"],
        )


def _check_payload(payload: object, path: Path) -> dict[str, Any]:
    if not isinstance(payload, dict) or payload.get("format") != BUNDLE_FORMAT:
        raise FormatError(
            "File does not contain a solution bundle",
            details={"path": str(path), "type": type(payload).__name__},
        )
    if payload.get("version") != BUNDLE_VERSION:
        raise FormatError(
            f"Unsupported solution bundle version {payload.get('version')!r}",
            details={"path": str(path), "supported": BUNDLE_VERSION},
        )
    missing = [key for key in _REQUIRED_KEYS if key not in payload]
    if missing:
        raise FormatError("Solution bundle is incomplete", details={"path": str(path), "missing": missing})
    return payload


def save_solution_bundle(bundle: SolutionBundle, path: str | Path) -> Path:
    """Record provenance and hash on the bundle, then write it.

    Args:
        bundle: Bundle to save; its provenance and bundle_hash are filled in.
        path: File path (.joblib is appended when there is no suffix).

    Returns:
        Path to the saved file.
    """
    path = Path(path)
    if not path.suffix:
        path = path.with_suffix(".joblib")
    path.parent.mkdir(parents=True, exist_ok=True)

    bundle.provenance = {
        "created_at": datetime.now(UTC).isoformat(),
        "python": platform.python_version(),
        "numpy": np.__version__,
    }
    bundle.bundle_hash = bundle.compute_hash()
    joblib.dump(bundle.to_payload(), path, compress=3)  # pyright: ignore[reportUnknownMemberType]

    logger.info(
        "multiscat.solution_bundle_saved",
        path=str(path),
        bundle_hash=bundle.bundle_hash,
        n_total=bundle.state.size,
    )
    return path


def load_solution_bundle(path: str | Path, base_dir: str | Path | None = None) -> SolutionBundle:
    """Load a solution bundle and verify its hash.

    With base_dir given, the resolved path must lie inside it.

    Raises:
        FileNotFoundError: If the path does not exist.
        ValueError: If the path is outside base_dir.
        FormatError: On a foreign file, an unknown version or a hash mismatch.
    """
    path = Path(path).resolve()
    if base_dir is not None and not path.is_relative_to(Path(base_dir).resolve()):
        logger.warning("multiscat.bundle_load_rejected", path=str(path), base_dir=str(base_dir))
        raise ValueError(f"Bundle path '{path}' is outside the allowed directory '{base_dir}'")
    if not path.exists():
        raise FileNotFoundError(f"Solution bundle not found: {path}")

    bundle = SolutionBundle.from_payload(
        _check_payload(joblib.load(path), path)  # pyright: ignore[reportUnknownMemberType]
    )

    saved_numpy = bundle.numpy_version
    if saved_numpy and saved_numpy.split(".")[0] != np.__version__.split(".")[0]:
        logger.warning("multiscat.numpy_version_mismatch", saved=saved_numpy, current=np.__version__)
    if bundle.bundle_hash != bundle.compute_hash():
        raise FormatError("Solution bundle hash does not match its contents", details={"path": str(path)})

    logger.info("multiscat.solution_bundle_loaded", path=str(path), bundle_hash=bundle.bundle_hash)
    return bundle
