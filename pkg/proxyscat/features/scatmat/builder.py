"""Scattering-matrix construction.

Composition: A = L K^{-1} R with

    R = [D, -S]_{P -> Gamma}                 incoming proxy data -> incident trace on Gamma
    K = 1/2 + D_Gamma + ik S_Gamma           combined-field operator
    L = [D + ik S ; D' + ik S']_{Gamma -> P}  density -> outgoing proxy data

Columns: each column is a separate scattering solve for the field of one
weighted dipole (u columns) or charge (du/dn columns) at a proxy node.
"""

from __future__ import annotations

import time
from typing import Literal, cast

import numpy as np

from proxyscat.core.exceptions import ConfigError
from proxyscat.core.logging import get_logger
from proxyscat.features.geom.curves import DiscretizedCurve
from proxyscat.features.geom.lattices import check_enclosed
from proxyscat.features.linalg.dense import lu_factor
from proxyscat.features.potentials.combined import (
    combined_field_matrix,
    eval_scattered,
    solve_combined_field,
)
from proxyscat.features.potentials.kernels import (
    KernelContext,
    LayerKind,
    as_context,
    kernel_matrix,
)
from proxyscat.features.potentials.layer import layer_matrices
from proxyscat.features.scatmat.matrix import (
    ComplexArray,
    Provenance,
    ScatteringMatrix,
    short_hash,
)

logger = get_logger(__name__)

BuildMethod = Literal["composition", "columns"]

# Digits of the proxy offset that enter the provenance hash.
OFFSET_DIGITS = 12


def provenance_for(
    scatterer: DiscretizedCurve, proxy: DiscretizedCurve, ctx: KernelContext
) -> Provenance:
    """Provenance hashes; equal for rigid horizontal translates (any translate in free space)."""
    offset = tuple(
        round(p - s, OFFSET_DIGITS) + 0.0 for p, s in zip(proxy.center, scatterer.center, strict=True)
    )
    medium = ctx.medium_key()
    if ctx.is_layered:
        medium += f":height={scatterer.center[1]!r}"
    return Provenance(
        shape_hash=short_hash(scatterer.signature),
        proxy_hash=short_hash(proxy.signature, repr(offset)),
        medium_hash=short_hash(medium),
    )


def resolution_estimate(densities: ComplexArray) -> float:
    """Largest trailing-mode Fourier magnitude of the densities relative to the largest mode."""
    coeffs = np.abs(np.fft.fft(densities, axis=0))
    n = coeffs.shape[0]
    freq = np.abs(np.fft.fftfreq(n, d=1.0 / n))
    peak = float(coeffs.max())
    if peak == 0.0:
        return 0.0
    return float(coeffs[freq >= 0.45 * n].max() / peak)


def _scaled(unscaled: ComplexArray, weights: np.ndarray) -> ComplexArray:
    s = np.sqrt(np.concatenate((weights, weights)))
    result: ComplexArray = s[:, None] * unscaled / s[None, :]
    return result


def _outgoing_operator(
    scatterer: DiscretizedCurve, proxy: DiscretizedCurve, ctx: KernelContext
) -> ComplexArray:
    mats = layer_matrices(["S", "D", "S'", "D'"], scatterer, proxy, ctx)
    ik = 1j * ctx.k
    return np.vstack(
        (
            mats[LayerKind.D].entries + ik * mats[LayerKind.S].entries,
            mats[LayerKind.DP].entries + ik * mats[LayerKind.SP].entries,
        )
    )


def _incident_operator(
    scatterer: DiscretizedCurve, proxy: DiscretizedCurve, ctx: KernelContext
) -> ComplexArray:
    mats = layer_matrices(["S", "D"], proxy, scatterer, ctx)
    return np.hstack((mats[LayerKind.D].entries, -mats[LayerKind.S].entries))


def build_scattering_matrix(
    scatterer: DiscretizedCurve,
    proxy: DiscretizedCurve,
    k: float | KernelContext,
    method: BuildMethod = "composition",
) -> ScatteringMatrix:
    """Scattering matrix of a sound-soft obstacle on its proxy surface.

    Args:
        scatterer: Discretized boundary Gamma.
        proxy: Discretized proxy P strictly enclosing Gamma.
        k: Wavenumber or kernel context (layered media need a context).
        method: "composition" or "columns".

    Returns:
        Weight-scaled ScatteringMatrix.

    Raises:
        GeometryError: If Gamma is not strictly inside P.
        SingularMatrixError: If the combined-field matrix is singular.
        ConfigError: On an unknown method.
    """
    ctx = as_context(k)
    if method not in ("composition", "columns"):
        raise ConfigError(f"Unknown scattering matrix method: {method}")
    clearance = check_enclosed(scatterer, proxy)
    start = time.perf_counter()
    logger.info(
        "scatmat.build_started",
        method=method,
        n_gamma=scatterer.n,
        n_p=proxy.n,
        medium=ctx.medium,
        clearance=clearance,
    )

    factorization = lu_factor(combined_field_matrix(scatterer, ctx))
    incident = _incident_operator(scatterer, proxy, ctx)

    if method == "composition":
        densities = factorization.solve(incident)
        unscaled = _outgoing_operator(scatterer, proxy, ctx) @ densities
    else:
        densities = np.empty_like(incident)
        unscaled = np.empty((2 * proxy.n, 2 * proxy.n), dtype=np.complex128)
        for j in range(2 * proxy.n):
            node = j % proxy.n
            y, n_y = proxy.nodes[node : node + 1], proxy.normals[node : node + 1]
            w = proxy.weights[node]
            if j < proxy.n:
                u_in = -w * kernel_matrix("D", ctx, scatterer.nodes, y, source_normals=n_y)[:, 0]
            else:
                u_in = w * kernel_matrix("S", ctx, scatterer.nodes, y)[:, 0]
            sigma = solve_combined_field(scatterer, ctx, u_in, factorization=factorization)
            field = eval_scattered(scatterer, sigma, proxy.nodes, ctx, normals=proxy.normals)
            densities[:, j] = sigma
            outgoing = (field.values, cast(ComplexArray, field.normal_derivatives))
            unscaled[:, j] = np.concatenate(outgoing)

    elapsed = time.perf_counter() - start
    estimate = resolution_estimate(densities)
    matrix = ScatteringMatrix(
        entries=_scaled(unscaled, proxy.weights),
        proxy_weights=proxy.weights.copy(),
        provenance=provenance_for(scatterer, proxy, ctx),
        medium="layered" if ctx.is_layered else "free",
        wavenumbers=ctx.wavenumbers,
        resolution_estimate=estimate,
        build_seconds=elapsed,
    )
    logger.info(
        "scatmat.build_completed",
        method=method,
        n_p=proxy.n,
        seconds=round(elapsed, 4),
        condition_estimate=factorization.condition_estimate,
        resolution_estimate=estimate,
    )
    return matrix
