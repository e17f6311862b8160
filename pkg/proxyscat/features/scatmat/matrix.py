"""Scattering matrix of one obstacle with respect to its proxy surface.

A maps incoming boundary data (u, du/dn) on the proxy P to the outgoing data
of the field the obstacle scatters in response. Entries are stored weight
scaled, W^{1/2} A W^{-1/2} with W = diag(w, w) from the proxy quadrature
weights, so that the spectrum of A reflects the continuous operator.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Any, Literal

import numpy as np

from proxyscat.core.exceptions import DimensionError

ComplexArray = np.ndarray[Any, np.dtype[np.complex128]]
FloatArray = np.ndarray[Any, np.dtype[np.float64]]


def short_hash(*parts: str) -> str:
    """16-character SHA-256 of the joined parts."""
    return hashlib.sha256("|".join(parts).encode()).hexdigest()[:16]


@dataclass(frozen=True)
class Provenance:
    """Hashes identifying what a scattering matrix was built from.

    Attributes:
        shape_hash: Scatterer shape and discretization, center excluded.
        proxy_hash: Proxy layout and its offset from the scatterer.
        medium_hash: Medium wavenumbers, Sommerfeld rule and, when layered,
            the scatterer height.
    """

    shape_hash: str
    proxy_hash: str
    medium_hash: str

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.shape_hash, self.proxy_hash, self.medium_hash)

    def to_dict(self) -> dict[str, str]:
        return {
            "shape_hash": self.shape_hash,
            "proxy_hash": self.proxy_hash,
            "medium_hash": self.medium_hash,
        }


@dataclass(frozen=True, eq=False)
class ScatteringMatrix:
    """Weight-scaled scattering matrix with its provenance.

    Attributes:
        entries: (2 n_p, 2 n_p) matrix; rows and columns ordered [u; du/dn].
        proxy_weights: Quadrature weights of the proxy nodes.
        provenance: What the matrix was built from.
        medium: "free" or "layered".
        wavenumbers: (k,) or (k_plus, k_minus).
        resolution_estimate: Relative size of the trailing Fourier modes of the
            boundary densities, a proxy for scatterer under-resolution.
        build_seconds: Wall time of the build.
    """

    entries: ComplexArray
    proxy_weights: FloatArray
    provenance: Provenance
    medium: Literal["free", "layered"] = "free"
    wavenumbers: tuple[float, ...] = ()
    resolution_estimate: float = 0.0
    build_seconds: float = 0.0

    def __post_init__(self) -> None:
        n = 2 * self.proxy_weights.shape[0]
        if self.entries.shape != (n, n):
            raise DimensionError(
                f"Scattering matrix shape {self.entries.shape} does not match n_p={n // 2}",
                details={"shape": list(self.entries.shape), "n_p": n // 2},
            )

    @property
    def n_p(self) -> int:
        return int(self.proxy_weights.shape[0])

    @property
    def sqrt_weights(self) -> FloatArray:
        """sqrt(w) repeated for the u and du/dn halves."""
        s = np.sqrt(self.proxy_weights)
        result: FloatArray = np.concatenate((s, s))
        return result

    def unscaled_entries(self) -> ComplexArray:
        """W^{-1/2} entries W^{1/2}: the matrix acting on raw boundary values."""
        s = self.sqrt_weights
        result: ComplexArray = self.entries / s[:, None] * s[None, :]
        return result

    def apply(self, incoming: ComplexArray) -> ComplexArray:
        """Outgoing data for weight-scaled incoming data; see apply_scattering_matrix."""
        return apply_scattering_matrix(self, incoming)


def apply_scattering_matrix(matrix: ScatteringMatrix, incoming: ComplexArray) -> ComplexArray:
    """A b for weight-scaled incoming data b of length 2 n_p.

    Raises:
        DimensionError: If the data length differs from 2 n_p.
    """
    data = np.asarray(incoming)
    if data.shape[0] != 2 * matrix.n_p:
        raise DimensionError(
            f"Incoming data length {data.shape[0]} does not match 2*n_p={2 * matrix.n_p}"
        )
    result: ComplexArray = matrix.entries @ data
    return result
