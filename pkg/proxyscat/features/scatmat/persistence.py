"""Binary storage of scattering matrices.

Layout (little-endian):
    header   4s magic "PSCM", u32 format version, u32 n_p, u32 medium tag (0 free, 1 layered)
    k        f64 k (free) or f64 k_plus, f64 k_minus (layered)
    entries  (2 n_p)^2 complex128, row-major, weight scaled

Files are written to a temporary sibling and renamed into place.
"""

from __future__ import annotations

import os
import struct
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Literal

import numpy as np

from proxyscat.core.exceptions import FormatError, ReuseError
from proxyscat.core.logging import get_logger
from proxyscat.features.geom.curves import DiscretizedCurve
from proxyscat.features.potentials.kernels import KernelContext, as_context
from proxyscat.features.scatmat.builder import provenance_for
from proxyscat.features.scatmat.matrix import ComplexArray, ScatteringMatrix

logger = get_logger(__name__)

MAGIC = b"PSCM"
FORMAT_VERSION = 1
HEADER = struct.Struct("<4sIII")
MEDIUM_TAGS: dict[str, int] = {"free": 0, "layered": 1}
WAVENUMBER_COUNT = {0: 1, 1: 2}


@dataclass(frozen=True)
class ScatteringMatrixFile:
    """Contents of a stored scattering matrix."""

    n_p: int
    medium: Literal["free", "layered"]
    wavenumbers: tuple[float, ...]
    entries: ComplexArray


def write_scattering_matrix(matrix: ScatteringMatrix, path: str | Path) -> Path:
    """Write a scattering matrix atomically.

    Returns:
        Path of the written file.
    """
    path = Path(path)
    if not path.suffix:
        path = path.with_suffix(".pscm")
    path.parent.mkdir(parents=True, exist_ok=True)

    tag = MEDIUM_TAGS[matrix.medium]
    if len(matrix.wavenumbers) != WAVENUMBER_COUNT[tag]:
        raise FormatError(
            f"{matrix.medium} matrices carry {WAVENUMBER_COUNT[tag]} wavenumber(s), "
            f"got {len(matrix.wavenumbers)}"
        )
    payload = (
        HEADER.pack(MAGIC, FORMAT_VERSION, matrix.n_p, tag)
        + struct.pack(f"<{len(matrix.wavenumbers)}d", *matrix.wavenumbers)
        + np.ascontiguousarray(matrix.entries, dtype="<c16").tobytes(order="C")
    )
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise

    logger.info(
        "scatmat.matrix_saved",
        path=str(path),
        n_p=matrix.n_p,
        medium=matrix.medium,
        bytes=len(payload),
    )
    return path


def read_scattering_matrix(path: str | Path) -> ScatteringMatrixFile:
    """Read a stored scattering matrix.

    Raises:
        FileNotFoundError: If the file does not exist.
        FormatError: On a bad magic, unknown version or medium, or wrong length.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Scattering matrix file not found: {path}")
    data = path.read_bytes()
    if len(data) < HEADER.size:
        raise FormatError("File is shorter than the header", details={"path": str(path)})

    magic, version, n_p, tag = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise FormatError(f"Bad magic {magic!r}", details={"path": str(path)})
    if version != FORMAT_VERSION:
        raise FormatError(f"Unsupported format version {version}", details={"path": str(path)})
    if tag not in WAVENUMBER_COUNT:
        raise FormatError(f"Unknown medium tag {tag}", details={"path": str(path)})

    count = WAVENUMBER_COUNT[tag]
    offset = HEADER.size + 8 * count
    expected = offset + 16 * (2 * n_p) ** 2
    if len(data) != expected:
        raise FormatError(
            f"Expected {expected} bytes, found {len(data)}",
            details={"path": str(path), "n_p": n_p},
        )
    wavenumbers = struct.unpack_from(f"<{count}d", data, HEADER.size)
    entries = np.frombuffer(data, dtype="<c16", offset=offset).reshape(2 * n_p, 2 * n_p)
    medium: Literal["free", "layered"] = "free" if tag == 0 else "layered"

    logger.info("scatmat.matrix_loaded", path=str(path), n_p=n_p, medium=medium)
    return ScatteringMatrixFile(
        n_p=n_p,
        medium=medium,
        wavenumbers=tuple(wavenumbers),
        entries=entries.astype(np.complex128),
    )


def restore_scattering_matrix(
    stored: ScatteringMatrixFile,
    scatterer: DiscretizedCurve,
    proxy: DiscretizedCurve,
    k: float | KernelContext,
) -> ScatteringMatrix:
    """Attach a stored matrix to the obstacle and proxy it is meant for.

    The file carries no geometry, so only the node count and the medium can be
    checked; the provenance is taken from the given pair.

    Raises:
        ReuseError: If n_p, the medium or the wavenumbers differ.
    """
    ctx = as_context(k)
    medium = "layered" if ctx.is_layered else "free"
    if stored.n_p != proxy.n or stored.medium != medium or stored.wavenumbers != ctx.wavenumbers:
        raise ReuseError(
            "Stored scattering matrix does not match the configured proxy or medium",
            details={
                "stored": {
                    "n_p": stored.n_p,
                    "medium": stored.medium,
                    "wavenumbers": list(stored.wavenumbers),
                },
                "configured": {"n_p": proxy.n, "medium": medium, "wavenumbers": list(ctx.wavenumbers)},
            },
        )
    return ScatteringMatrix(
        entries=stored.entries,
        proxy_weights=proxy.weights.copy(),
        provenance=provenance_for(scatterer, proxy, ctx),
        medium=stored.medium,
        wavenumbers=stored.wavenumbers,
    )
