"""Sommerfeld corrections summed over many sources in O((N + M) L) work.

W(xi) = sum_j w_j [mu_j (-i xi n1_j - beta_plus n2_j) - rho_j] exp(-beta_plus y2_j - i xi y1_j)
is formed once; the correction at each target is then a single sum over xi.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from proxyscat.core.exceptions import DimensionError, DomainError
from proxyscat.features.layered.kernels import SPECTRAL_CHUNK, LayeredContext
from proxyscat.features.layered.sommerfeld import ComplexArray


@dataclass(frozen=True)
class FarCorrection:
    """Correction values and optional target normal derivatives."""

    values: ComplexArray
    normal_derivatives: ComplexArray | None = None


def spectral_density(
    ctx: LayeredContext,
    sources: Any,
    source_normals: Any,
    source_weights: Any,
    mu: ComplexArray,
    rho: ComplexArray,
) -> ComplexArray:
    """W(xi) for the layer densities mu (double layer) and rho (single layer, subtracted)."""
    y = np.asarray(sources, dtype=np.float64)
    n = np.asarray(source_normals, dtype=np.float64)
    w = np.asarray(source_weights, dtype=np.float64)
    if not (y.shape[0] == n.shape[0] == w.shape[0] == mu.shape[0] == rho.shape[0]):
        raise DimensionError("Source arrays and densities must have equal length")
    xi = ctx.rule.nodes
    density = np.zeros(xi.size, dtype=np.complex128)
    for j0 in range(0, y.shape[0], SPECTRAL_CHUNK):
        j1 = j0 + SPECTRAL_CHUNK
        base = ctx.source_factors(y[j0:j1])
        normal = -1j * xi[None, :] * n[j0:j1, 0, None] - ctx.beta_plus[None, :] * n[j0:j1, 1, None]
        amplitude = (w[j0:j1] * mu[j0:j1])[:, None] * normal - (w[j0:j1] * rho[j0:j1])[:, None]
        density += np.sum(amplitude * base, axis=0)
    return density


def sommerfeld_far_apply(
    ctx: LayeredContext,
    sources: Any,
    source_normals: Any,
    source_weights: Any,
    mu: ComplexArray,
    rho: ComplexArray,
    targets: Any,
    target_normals: Any = None,
) -> FarCorrection:
    """sum_j w_j (d s_plus/dn_y mu_j - s_plus rho_j) at every target.

    Raises:
        DomainError: If a source or target lies below delta.
    """
    y = np.atleast_2d(np.asarray(sources, dtype=np.float64))
    x = np.atleast_2d(np.asarray(targets, dtype=np.float64))
    floor = ctx.delta * (1.0 - 1e-12)
    if y[:, 1].min() < floor or x[:, 1].min() < floor:
        raise DomainError(
            f"Far application requires all heights >= delta={ctx.delta}",
            details={"min_source": float(y[:, 1].min()), "min_target": float(x[:, 1].min())},
        )
    density = spectral_density(ctx, y, source_normals, source_weights, mu, rho) * ctx.reflected

    nx = None
    if target_normals is not None:
        nx = np.atleast_2d(np.asarray(target_normals, dtype=np.float64))
    values = np.empty(x.shape[0], dtype=np.complex128)
    derivatives = None if nx is None else np.empty(x.shape[0], dtype=np.complex128)
    for i0 in range(0, x.shape[0], SPECTRAL_CHUNK):
        i1 = i0 + SPECTRAL_CHUNK
        ex = ctx.target_factors("upper", x[i0:i1])
        values[i0:i1] = ex @ density
        if derivatives is not None and nx is not None:
            factor = (
                1j * ctx.rule.nodes[None, :] * nx[i0:i1, 0, None]
                - ctx.beta_plus[None, :] * nx[i0:i1, 1, None]
            )
            derivatives[i0:i1] = (ex * factor) @ density
    return FarCorrection(values=values, normal_derivatives=derivatives)
