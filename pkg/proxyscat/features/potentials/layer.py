"""Discretized layer potentials between disjoint curves and at free points."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from proxyscat.core.exceptions import DimensionError, GeometryError
from proxyscat.features.geom.curves import DiscretizedCurve
from proxyscat.features.potentials.kernels import (
    ComplexArray,
    FloatArray,
    KernelContext,
    LayerKind,
    as_context,
    kernel_set,
)

# Rows per block when evaluating at many free points.
EVAL_CHUNK = 2048


@dataclass(frozen=True)
class PotentialMatrix:
    """Kernel times source quadrature weights: entries[i, j] = K(x_i, y_j) w_j.

    Attributes:
        kind: Which layer potential.
        entries: (m, n) complex matrix.
    """

    kind: LayerKind
    entries: ComplexArray

    @property
    def shape(self) -> tuple[int, int]:
        return (int(self.entries.shape[0]), int(self.entries.shape[1]))

    def apply(self, density: ComplexArray) -> ComplexArray:
        """Potential of a source density at the targets.

        Raises:
            DimensionError: If the density length differs from the source count.
        """
        if density.shape[0] != self.entries.shape[1]:
            raise DimensionError(
                f"Density length {density.shape[0]} does not match {self.entries.shape[1]} sources"
            )
        result: ComplexArray = self.entries @ density
        return result


def layer_matrices(
    kinds: list[LayerKind | str],
    source: DiscretizedCurve,
    target: DiscretizedCurve,
    k: float | KernelContext,
) -> dict[LayerKind, PotentialMatrix]:
    """Layer-potential matrices from source curve to target curve.

    Raises:
        GeometryError: If the curves are the same object or share a node;
            self interactions need the singular quadrature in selfop.
    """
    if source is target:
        raise GeometryError("Source and target curves coincide; use self_operator")
    ctx = as_context(k)
    gap = _min_distance(source.nodes, target.nodes)
    if gap == 0.0:
        raise GeometryError("Source and target curves share a node", details={"gap": gap})
    kernels = kernel_set(ctx, target.nodes, source.nodes, kinds, target.normals, source.normals)
    return {
        kind: PotentialMatrix(kind=kind, entries=mat * source.weights[None, :])
        for kind, mat in kernels.items()
    }


def layer_matrix(
    kind: LayerKind | str,
    source: DiscretizedCurve,
    target: DiscretizedCurve,
    k: float | KernelContext,
) -> PotentialMatrix:
    """Single layer-potential matrix; see layer_matrices."""
    kind = LayerKind(kind)
    return layer_matrices([kind], source, target, k)[kind]


def _min_distance(a: FloatArray, b: FloatArray) -> float:
    best = np.inf
    for start in range(0, a.shape[0], EVAL_CHUNK):
        block = a[start : start + EVAL_CHUNK]
        d = np.hypot(block[:, 0, None] - b[None, :, 0], block[:, 1, None] - b[None, :, 1])
        best = min(best, float(d.min()))
    return best


def potential_at(
    terms: dict[LayerKind | str, ComplexArray],
    source: DiscretizedCurve,
    points: Any,
    k: float | KernelContext,
    normals: Any = None,
) -> ComplexArray:
    """Sum of layer potentials of source densities at free points.

    Args:
        terms: Mapping kind -> density on the source nodes, e.g. {"D": mu, "S": -rho}.
        source: Source curve.
        points: (m, 2) evaluation points, none of them on a source node.
        k: Wavenumber or kernel context.
        normals: (m, 2) target normals, required for S' and D' terms.

    Returns:
        (m,) complex values.
    """
    ctx = as_context(k)
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    nrm = None if normals is None else np.atleast_2d(np.asarray(normals, dtype=np.float64))
    weighted = {LayerKind(kd): source.weights * dens for kd, dens in terms.items()}
    out = np.zeros(pts.shape[0], dtype=np.complex128)
    for start in range(0, pts.shape[0], EVAL_CHUNK):
        stop = start + EVAL_CHUNK
        mats = kernel_set(
            ctx,
            pts[start:stop],
            source.nodes,
            list(weighted),
            None if nrm is None else nrm[start:stop],
            source.normals,
        )
        for kind, dens in weighted.items():
            out[start:stop] += mats[kind] @ dens
    return out
