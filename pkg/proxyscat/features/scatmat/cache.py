"""Reuse of scattering matrices across rigidly translated obstacles."""

from __future__ import annotations

from proxyscat.core.exceptions import ReuseError
from proxyscat.core.logging import get_logger
from proxyscat.features.geom.curves import DiscretizedCurve
from proxyscat.features.potentials.kernels import KernelContext, as_context
from proxyscat.features.scatmat.builder import (
    BuildMethod,
    build_scattering_matrix,
    provenance_for,
)
from proxyscat.features.scatmat.matrix import ScatteringMatrix

logger = get_logger(__name__)


class ScatteringMatrixCache:
    """Scattering matrices keyed by (shape hash, proxy hash, medium hash).

    Attributes:
        builds: Number of matrices built.
        hits: Number of lookups answered from the cache.
    """

    def __init__(self, method: BuildMethod = "composition") -> None:
        self.method: BuildMethod = method
        self._store: dict[tuple[str, str, str], ScatteringMatrix] = {}
        self.builds = 0
        self.hits = 0

    def __len__(self) -> int:
        return len(self._store)

    def matrices(self) -> list[ScatteringMatrix]:
        """Distinct matrices in build order."""
        return list(self._store.values())

    def insert(self, matrix: ScatteringMatrix) -> None:
        """Seed the cache with a matrix built or loaded elsewhere."""
        self._store[matrix.provenance.key] = matrix
        logger.debug("scatmat.cache_seeded", key=matrix.provenance.key)

    def get_or_build(
        self,
        scatterer: DiscretizedCurve,
        proxy: DiscretizedCurve,
        k: float | KernelContext,
    ) -> ScatteringMatrix:
        """Cached matrix for an equivalent configuration, building it on a miss."""
        ctx = as_context(k)
        key = provenance_for(scatterer, proxy, ctx).key
        cached = self._store.get(key)
        if cached is not None:
            self.hits += 1
            return cached
        matrix = build_scattering_matrix(scatterer, proxy, ctx, method=self.method)
        self._store[key] = matrix
        self.builds += 1
        logger.debug("scatmat.cache_miss", key=key, builds=self.builds, hits=self.hits)
        return matrix


def translate_reuse(
    matrix: ScatteringMatrix,
    shift: tuple[float, float],
    scatterer: DiscretizedCurve | None = None,
    proxy: DiscretizedCurve | None = None,
    k: float | KernelContext | None = None,
) -> ScatteringMatrix:
    """Matrix of a rigidly translated obstacle: the same matrix, after checking equivalence.

    Args:
        matrix: Matrix of the original obstacle.
        shift: Translation applied to obstacle and proxy.
        scatterer: Translated scatterer, compared against the provenance when given.
        proxy: Translated proxy, required with scatterer.
        k: Medium of the translated obstacle, required with scatterer.

    Raises:
        ReuseError: On a vertical shift in a layered medium or a provenance mismatch.
    """
    if matrix.medium == "layered" and shift[1] != 0.0:
        raise ReuseError(
            "Vertical translation in a layered medium changes the matrix; rebuild instead",
            details={"shift": list(shift)},
        )
    if scatterer is not None:
        if proxy is None or k is None:
            raise ReuseError("Checking reuse needs the translated scatterer, proxy and medium")
        provenance = provenance_for(scatterer, proxy, as_context(k))
        if provenance != matrix.provenance:
            raise ReuseError(
                "Translated configuration is not equivalent to the stored matrix",
                details={"expected": matrix.provenance.to_dict(), "found": provenance.to_dict()},
            )
    return matrix
