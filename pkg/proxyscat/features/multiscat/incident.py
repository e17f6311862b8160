"""Incident fields and their samples on the proxy surfaces."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any, Protocol, runtime_checkable

import numpy as np

from proxyscat.core.exceptions import ConfigError
from proxyscat.features.geom.curves import DiscretizedCurve
from proxyscat.features.multiscat.state import BoundaryState, ComplexArray
from proxyscat.features.potentials.kernels import LayerKind, free_kernel_set


@runtime_checkable
class IncidentField(Protocol):
    """Field defined everywhere outside its sources, with its gradient."""

    def values(self, points: Any) -> ComplexArray: ...

    def gradients(self, points: Any) -> ComplexArray: ...


@dataclass(frozen=True)
class PlaneWave:
    """e^{ik (cos(angle) x1 + sin(angle) x2)}."""

    k: float
    angle: float = 0.0

    def __post_init__(self) -> None:
        if self.k <= 0:
            raise ConfigError(f"Wavenumber must be > 0, got {self.k}")

    @property
    def direction(self) -> tuple[float, float]:
        return (float(np.cos(self.angle)), float(np.sin(self.angle)))

    def values(self, points: Any) -> ComplexArray:
        p = np.atleast_2d(np.asarray(points, dtype=np.float64))
        d = self.direction
        result: ComplexArray = np.exp(1j * self.k * (d[0] * p[:, 0] + d[1] * p[:, 1]))
        return result

    def gradients(self, points: Any) -> ComplexArray:
        u = self.values(points)
        result: ComplexArray = 1j * self.k * u[:, None] * np.asarray(self.direction)[None, :]
        return result


@dataclass(frozen=True)
class PointSource:
    """Free-space field g_k(x, source) of a unit point source."""

    k: float
    source: tuple[float, float]

    def __post_init__(self) -> None:
        if self.k <= 0:
            raise ConfigError(f"Wavenumber must be > 0, got {self.k}")

    def values(self, points: Any) -> ComplexArray:
        kernels = free_kernel_set(self.k, points, [self.source], [LayerKind.S])
        result: ComplexArray = kernels[LayerKind.S][:, 0]
        return result

    def gradients(self, points: Any) -> ComplexArray:
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        columns = [
            free_kernel_set(
                self.k, pts, [self.source], [LayerKind.SP], target_normals=np.tile(e, (len(pts), 1))
            )[LayerKind.SP][:, 0]
            for e in np.eye(2)
        ]
        result: ComplexArray = np.column_stack(columns)
        return result


def normal_derivative(field: IncidentField, points: Any, normals: Any) -> ComplexArray:
    """n . grad u at the points."""
    grad = field.gradients(points)
    result: ComplexArray = np.sum(grad * np.asarray(normals), axis=1)
    return result


def incident_data(field: IncidentField, proxies: Sequence[DiscretizedCurve]) -> BoundaryState:
    """Raw (u_in, du_in/dn) at every proxy node."""
    return BoundaryState.from_blocks(
        [(field.values(p.nodes), normal_derivative(field, p.nodes, p.normals)) for p in proxies]
    )
