"""Free-space Helmholtz Green's function and its layer-potential kernels.

g_k(x, y) = (i/4) H_0(k|x - y|). With d = x - y and r = |d| the four kernels are

    S : g
    D : dg/dn_y  = (ik/4) H_1(kr) (n_y . d) / r
    S': dg/dn_x  = -(ik/4) H_1(kr) (n_x . d) / r
    D': d2g/dn_x dn_y = -(ik^2/4) H_2(kr) (n_x . d)(n_y . d) / r^2 + (ik/4) H_1(kr) (n_x . n_y) / r

CRITICAL: coincident target/source pairs raise DomainError; diagonal blocks of
a curve against itself go through the self operators in selfop.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from enum import StrEnum
from typing import Any, Protocol, runtime_checkable

import numpy as np

from proxyscat.core.exceptions import ConfigError, DimensionError, DomainError
from proxyscat.features.specfun.bessel import hankel1

FloatArray = np.ndarray[Any, np.dtype[np.float64]]
ComplexArray = np.ndarray[Any, np.dtype[np.complex128]]


class LayerKind(StrEnum):
    """Layer-potential kernel: value or normal derivatives of g."""

    S = "S"
    D = "D"
    SP = "S'"
    DP = "D'"

    @property
    def needs_source_normals(self) -> bool:
        return self in (LayerKind.D, LayerKind.DP)

    @property
    def needs_target_normals(self) -> bool:
        return self in (LayerKind.SP, LayerKind.DP)


@runtime_checkable
class MediumCorrection(Protocol):
    """Smooth correction added to the free-space kernel in a stratified medium.

    Targets with x2 >= 0 see free(k_plus) + correction; targets below the
    interface see the correction alone.
    """

    k_plus: float
    k_minus: float

    def correction_matrix(
        self,
        kind: LayerKind,
        targets: FloatArray,
        sources: FloatArray,
        target_normals: FloatArray | None = None,
        source_normals: FloatArray | None = None,
    ) -> ComplexArray: ...

    def medium_key(self) -> str: ...


@dataclass(frozen=True)
class KernelContext:
    """Wavenumber and optional layered-medium correction shared by all kernels.

    Attributes:
        k: Wavenumber of the medium containing the scatterers (k_plus when layered).
        layered: Interface correction, None in free space.
    """

    k: float
    layered: MediumCorrection | None = None

    def __post_init__(self) -> None:
        if not np.isfinite(self.k) or self.k <= 0:
            raise ConfigError(f"Wavenumber must be > 0, got {self.k}", details={"k": self.k})

    @property
    def is_layered(self) -> bool:
        return self.layered is not None

    @property
    def medium(self) -> str:
        return "layered" if self.layered is not None else "free"

    @property
    def wavenumbers(self) -> tuple[float, ...]:
        if self.layered is not None:
            return (self.layered.k_plus, self.layered.k_minus)
        return (self.k,)

    def medium_key(self) -> str:
        """Stable description of the medium for provenance hashing."""
        if self.layered is not None:
            return self.layered.medium_key()
        return f"free:k={self.k!r}"


def as_context(k: float | KernelContext) -> KernelContext:
    """Accept a bare wavenumber wherever a context is expected."""
    return k if isinstance(k, KernelContext) else KernelContext(k=float(k))


def _points(p: Any, name: str) -> FloatArray:
    arr = np.atleast_2d(np.asarray(p, dtype=np.float64))
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise DimensionError(f"{name} must have shape (n, 2), got {arr.shape}")
    return arr


def _normals(normals: Any, points: FloatArray, name: str) -> FloatArray:
    if normals is None:
        raise ConfigError(f"{name} are required for this kernel")
    arr = _points(normals, name)
    if arr.shape != points.shape:
        raise DimensionError(f"{name} shape {arr.shape} does not match points {points.shape}")
    return arr


def free_kernel_set(
    k: float,
    targets: Any,
    sources: Any,
    kinds: Iterable[LayerKind | str],
    target_normals: Any = None,
    source_normals: Any = None,
) -> dict[LayerKind, ComplexArray]:
    """Several free-space kernel matrices from one Hankel evaluation.

    Args:
        k: Wavenumber.
        targets: (m, 2) target points.
        sources: (n, 2) source points.
        kinds: Kernels to build.
        target_normals: (m, 2) unit normals, required for S' and D'.
        source_normals: (n, 2) unit normals, required for D and D'.

    Returns:
        Mapping kind -> (m, n) complex matrix (no quadrature weights).

    Raises:
        DomainError: If a target coincides with a source.
    """
    wanted = [LayerKind(kd) for kd in kinds]
    x = _points(targets, "targets")
    y = _points(sources, "sources")
    d1 = x[:, 0, None] - y[None, :, 0]
    d2 = x[:, 1, None] - y[None, :, 1]
    r = np.hypot(d1, d2)
    if r.size and r.min() == 0.0:
        i, j = np.unravel_index(int(np.argmin(r)), r.shape)
        raise DomainError(
            "Kernel evaluated at coincident points",
            details={"target_index": int(i), "source_index": int(j)},
        )

    kr = k * r
    h1 = hankel1(1, kr)
    h0 = hankel1(0, kr) if any(kd in (LayerKind.S, LayerKind.DP) for kd in wanted) else None

    ny_d = nx_d = None
    if any(kd.needs_source_normals for kd in wanted):
        ny = _normals(source_normals, y, "source_normals")
        ny_d = (ny[None, :, 0] * d1 + ny[None, :, 1] * d2) / r
    if any(kd.needs_target_normals for kd in wanted):
        nx = _normals(target_normals, x, "target_normals")
        nx_d = (nx[:, 0, None] * d1 + nx[:, 1, None] * d2) / r

    out: dict[LayerKind, ComplexArray] = {}
    for kind in wanted:
        if kind is LayerKind.S:
            out[kind] = 0.25j * h0
        elif kind is LayerKind.D:
            out[kind] = 0.25j * k * h1 * ny_d
        elif kind is LayerKind.SP:
            out[kind] = -0.25j * k * h1 * nx_d
        else:
            h2 = 2.0 * h1 / kr - h0
            nx_ny = nx[:, 0, None] * ny[None, :, 0] + nx[:, 1, None] * ny[None, :, 1]
            out[kind] = -0.25j * k**2 * h2 * nx_d * ny_d + 0.25j * k * h1 * nx_ny / r
    return out


def free_kernel_matrix(
    kind: LayerKind | str,
    k: float,
    targets: Any,
    sources: Any,
    target_normals: Any = None,
    source_normals: Any = None,
) -> ComplexArray:
    """Single free-space kernel matrix; see free_kernel_set."""
    kind = LayerKind(kind)
    return free_kernel_set(k, targets, sources, [kind], target_normals, source_normals)[kind]


def kernel_set(
    ctx: KernelContext,
    targets: Any,
    sources: Any,
    kinds: Iterable[LayerKind | str],
    target_normals: Any = None,
    source_normals: Any = None,
) -> dict[LayerKind, ComplexArray]:
    """Kernel matrices in the context's medium.

    Free space returns the free kernels. In a layered medium rows with x2 >= 0
    get free(k_plus) + correction and rows below the interface the correction only.
    """
    wanted = [LayerKind(kd) for kd in kinds]
    if ctx.layered is None:
        return free_kernel_set(ctx.k, targets, sources, wanted, target_normals, source_normals)

    x = _points(targets, "targets")
    y = _points(sources, "sources")
    tn = None if target_normals is None else _normals(target_normals, x, "target_normals")
    sn = None if source_normals is None else _normals(source_normals, y, "source_normals")
    upper = x[:, 1] >= 0.0
    out = {
        kind: ctx.layered.correction_matrix(kind, x, y, tn, sn).astype(np.complex128, copy=False)
        for kind in wanted
    }
    if upper.any():
        free = free_kernel_set(
            ctx.k, x[upper], y, wanted, None if tn is None else tn[upper], sn
        )
        for kind in wanted:
            out[kind][upper] += free[kind]
    return out


def kernel_matrix(
    kind: LayerKind | str,
    ctx: KernelContext,
    targets: Any,
    sources: Any,
    target_normals: Any = None,
    source_normals: Any = None,
) -> ComplexArray:
    """Single kernel matrix in the context's medium; see kernel_set."""
    kind = LayerKind(kind)
    return kernel_set(ctx, targets, sources, [kind], target_normals, source_normals)[kind]


def gk(k: float, x: Any, y: Any) -> complex:
    """g_k(x, y) at a single point pair."""
    return complex(free_kernel_matrix(LayerKind.S, k, x, y)[0, 0])


def gk_gradient_y(k: float, x: Any, y: Any) -> ComplexArray:
    """Gradient of g_k with respect to the source point y, (ik/4) H_1(kr) (x - y) / r."""
    grad: ComplexArray = np.array(
        [free_kernel_matrix(LayerKind.D, k, x, y, source_normals=[e])[0, 0] for e in np.eye(2)]
    )
    return grad


def gk_gradient_x(k: float, x: Any, y: Any) -> ComplexArray:
    """Gradient of g_k with respect to the target point x."""
    grad: ComplexArray = np.array(
        [free_kernel_matrix(LayerKind.SP, k, x, y, target_normals=[e])[0, 0] for e in np.eye(2)]
    )
    return grad


def gk_mixed_normal(k: float, x: Any, y: Any, nx: Any, ny: Any) -> complex:
    """n_x . grad_x (n_y . grad_y g_k(x, y))."""
    return complex(
        free_kernel_matrix(LayerKind.DP, k, x, y, target_normals=[nx], source_normals=[ny])[0, 0]
    )
