"""Combined-field integral equation for a sound-soft obstacle.

The scattered field is represented as u = D[sigma] + ik S[sigma]; the Dirichlet
condition u_sc = -u_in on Gamma gives (1/2 + D_Gamma + ik S_Gamma) sigma = -u_in,
which is uniquely solvable for every k > 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from proxyscat.core.config import get_settings
from proxyscat.core.exceptions import DomainError
from proxyscat.core.logging import get_logger
from proxyscat.features.geom.curves import DiscretizedCurve
from proxyscat.features.linalg.dense import LUFactorization, lu_factor
from proxyscat.features.potentials.kernels import (
    ComplexArray,
    KernelContext,
    LayerKind,
    as_context,
)
from proxyscat.features.potentials.layer import potential_at
from proxyscat.features.potentials.selfop import self_operator
from proxyscat.features.specfun.bessel import bessel_j, hankel1_seq

logger = get_logger(__name__)

SOLVE_RESIDUAL_WARN = 1e-10


def combined_field_matrix(curve: DiscretizedCurve, k: float | KernelContext) -> ComplexArray:
    """1/2 I + D_Gamma + ik S_Gamma on a scatterer curve."""
    ctx = as_context(k)
    s = self_operator(LayerKind.S, curve, ctx).entries
    d = self_operator(LayerKind.D, curve, ctx).entries
    matrix: ComplexArray = 0.5 * np.eye(curve.n) + d + 1j * ctx.k * s
    return matrix


def solve_combined_field(
    curve: DiscretizedCurve,
    k: float | KernelContext,
    u_in: ComplexArray,
    factorization: LUFactorization | None = None,
) -> ComplexArray:
    """Density sigma with (1/2 + D + ik S) sigma = -u_in on the curve.

    Args:
        curve: Scatterer boundary.
        k: Wavenumber or kernel context.
        u_in: Incident field at the curve nodes, shape (n,) or (n, m).
        factorization: Reusable LU of combined_field_matrix.

    Returns:
        Density with the shape of u_in.

    Raises:
        SingularMatrixError: If the factorization hits a zero pivot.
    """
    ctx = as_context(k)
    if factorization is None:
        matrix = combined_field_matrix(curve, ctx)
        factorization = lu_factor(matrix)
    else:
        matrix = None
    sigma = factorization.solve(-np.asarray(u_in, dtype=np.complex128))

    if matrix is not None:
        rhs_norm = float(np.linalg.norm(u_in)) or 1.0
        residual = float(np.linalg.norm(matrix @ sigma + u_in)) / rhs_norm
        if residual > SOLVE_RESIDUAL_WARN:
            logger.warning("potentials.combined_field_residual", residual=residual, n=curve.n)
    return sigma


@dataclass(frozen=True)
class ScatteredField:
    """Scattered field values and, when normals were given, normal derivatives."""

    values: ComplexArray
    normal_derivatives: ComplexArray | None = None


def eval_scattered(
    curve: DiscretizedCurve,
    sigma: ComplexArray,
    targets: Any,
    k: float | KernelContext,
    normals: Any = None,
    near_zone_factor: float | None = None,
) -> ScatteredField:
    """u = D[sigma] + ik S[sigma] (and its normal derivative) off the curve.

    Raises:
        DomainError: If a target lies on the curve.
    """
    ctx = as_context(k)
    pts = np.atleast_2d(np.asarray(targets, dtype=np.float64))
    spacing = float(curve.weights.max())
    distance = _distance_to_nodes(curve, pts)
    if distance.size and distance.min() <= 1e-12 * spacing:
        raise DomainError(
            "Evaluation target lies on the scatterer boundary",
            details={"min_distance": float(distance.min())},
        )
    factor = near_zone_factor if near_zone_factor is not None else get_settings().near_zone_factor
    near = int(np.count_nonzero(distance < factor * spacing))
    if near:
        logger.warning("potentials.near_zone_targets", count=near, spacing=spacing)

    values = potential_at({LayerKind.D: sigma, LayerKind.S: 1j * ctx.k * sigma}, curve, pts, ctx)
    derivatives = None
    if normals is not None:
        derivatives = potential_at(
            {LayerKind.DP: sigma, LayerKind.SP: 1j * ctx.k * sigma}, curve, pts, ctx, normals
        )
    return ScatteredField(values=values, normal_derivatives=derivatives)


def _distance_to_nodes(curve: DiscretizedCurve, pts: Any) -> Any:
    out = np.empty(pts.shape[0])
    for start in range(0, pts.shape[0], 2048):
        block = pts[start : start + 2048]
        d = np.hypot(
            block[:, 0, None] - curve.nodes[None, :, 0], block[:, 1, None] - curve.nodes[None, :, 1]
        )
        out[start : start + 2048] = d.min(axis=1)
    return out


def disk_scattered_field(
    k: float,
    radius: float,
    points: Any,
    order_max: int | None = None,
    center: tuple[float, float] = (0.0, 0.0),
) -> ComplexArray:
    """Exact field scattered by a sound-soft disk from the plane wave e^{ik x1}.

    u_sc = -e^{ik c1} sum_n eps_n i^n (J_n(kR) / H_n(kR)) H_n(kr) cos(n theta), with eps_0 = 1,
    eps_n = 2 and (r, theta) polar coordinates about the center c.

    Raises:
        DomainError: If a point lies inside or on the disk.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64)) - np.asarray(center)
    r = np.hypot(pts[:, 0], pts[:, 1])
    if np.any(r <= radius):
        raise DomainError("Disk series is valid outside the disk only")
    theta = np.arctan2(pts[:, 1], pts[:, 0])
    order_max = order_max if order_max is not None else int(k * radius) + 40

    orders = np.arange(order_max + 1)
    h_boundary = hankel1_seq(order_max, k * radius).values
    coeff = -np.where(orders == 0, 1.0, 2.0) * (1j**orders) * bessel_j(orders, k * radius) / h_boundary
    # the plane wave carries the phase e^{ik c1} at the disk center
    coeff = coeff * np.exp(1j * k * center[0])

    field = np.zeros(pts.shape[0], dtype=np.complex128)
    for idx, rr in enumerate(r):
        field[idx] = np.sum(coeff * hankel1_seq(order_max, k * rr).values * np.cos(orders * theta[idx]))
    return field
