"""Single- and double-layer operators of a smooth closed curve on itself.

Kress product quadrature: the kernel K(t, tau) is split as
K1(t, tau) ln(4 sin^2((t - tau)/2)) + K2(t, tau) with smooth K1, K2. The log
part is integrated exactly against trigonometric interpolants (weights R),
the smooth part by the trapezoidal rule. Convergence is super-algebraic for
analytic curves. Requires an even number of equispaced nodes.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import circulant

from proxyscat.core.exceptions import ConfigError
from proxyscat.features.geom.curves import DiscretizedCurve
from proxyscat.features.potentials.kernels import (
    ComplexArray,
    FloatArray,
    KernelContext,
    LayerKind,
    as_context,
)
from proxyscat.features.potentials.layer import PotentialMatrix
from proxyscat.features.specfun.bessel import bessel_j, hankel1

EULER_GAMMA = float(np.euler_gamma)


def kress_log_weights(n: int) -> FloatArray:
    """R_d for node offsets d = 0..n-1 of the log-singular quadrature.

    R_d = -(2 pi / m) sum_{l=1}^{m-1} cos(l t_d) / l - (pi / m^2) (-1)^d, m = n/2, t_d = 2 pi d / n.
    """
    if n % 2:
        raise ConfigError(f"Log quadrature needs an even node count, got {n}")
    m = n // 2
    d = np.arange(n)
    ell = np.arange(1, m)
    series = np.cos(np.outer(d, ell) * (2.0 * np.pi / n)) @ (1.0 / ell)
    weights: FloatArray = -(2.0 * np.pi / m) * series - (np.pi / m**2) * (-1.0) ** d
    return weights


def self_operator(
    kind: LayerKind | str, curve: DiscretizedCurve, k: float | KernelContext
) -> PotentialMatrix:
    """S_Gamma or D_Gamma of a scatterer curve on itself.

    In a layered medium the smooth interface correction is added with the
    plain trapezoidal weights.

    Raises:
        ConfigError: For kinds other than S and D, or curves without parametrization data.
    """
    kind = LayerKind(kind)
    ctx = as_context(k)
    if kind not in (LayerKind.S, LayerKind.D):
        raise ConfigError(f"Self operators are available for S and D only, got {kind}")
    if curve.speed is None or curve.tangents is None or curve.accelerations is None:
        raise ConfigError("Self operators need a parametrized scatterer curve")

    n = curve.n
    x, dx, ddx, speed = curve.nodes, curve.tangents, curve.accelerations, curve.speed
    log_weights = circulant(kress_log_weights(n))
    t_diff = curve.params[:, None] - curve.params[None, :]
    diag = np.eye(n, dtype=bool)
    with np.errstate(divide="ignore"):
        log_term = np.log(4.0 * np.sin(0.5 * t_diff) ** 2)
    log_term[diag] = 0.0

    d1 = x[:, 0, None] - x[None, :, 0]
    d2 = x[:, 1, None] - x[None, :, 1]
    r = np.hypot(d1, d2)
    r[diag] = 1.0
    kr = ctx.k * r

    if kind is LayerKind.S:
        singular = -(1.0 / (4.0 * np.pi)) * bessel_j(0, kr) * speed[None, :]
        singular[diag] = -speed / (4.0 * np.pi)
        smooth = 0.25j * hankel1(0, kr) * speed[None, :] - singular * log_term
        smooth[diag] = (
            0.25j
            - EULER_GAMMA / (2.0 * np.pi)
            - np.log(0.5 * ctx.k * speed) / (2.0 * np.pi)
        ) * speed
    else:
        cross = dx[None, :, 1] * d1 - dx[None, :, 0] * d2
        singular = -(ctx.k / (4.0 * np.pi)) * bessel_j(1, kr) * cross / r
        singular[diag] = 0.0
        smooth = 0.25j * ctx.k * hankel1(1, kr) * cross / r - singular * log_term
        smooth[diag] = (dx[:, 1] * ddx[:, 0] - dx[:, 0] * ddx[:, 1]) / (4.0 * np.pi * speed**2)

    entries: ComplexArray = log_weights * singular + (2.0 * np.pi / n) * smooth
    if ctx.layered is not None:
        correction = ctx.layered.correction_matrix(kind, x, x, curve.normals, curve.normals)
        entries = entries + correction * curve.weights[None, :]
    return PotentialMatrix(kind=kind, entries=entries)
