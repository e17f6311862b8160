"""Discretized closed curves: scatterer boundaries and proxy rectangles.

Scatterers use the periodic trapezoidal rule on an equispaced parameter grid,
proxies use Gauss-Legendre panels traversed counterclockwise.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Any, Literal

import numpy as np

from proxyscat.core.exceptions import ConfigError
from proxyscat.features.geom.schemas import RectProxySpec, ShapeSpec

FloatArray = np.ndarray[Any, np.dtype[np.float64]]

MIN_SCATTERER_NODES = 16


@dataclass(frozen=True, eq=False)
class DiscretizedCurve:
    """Quadrature nodes on a closed curve.

    Attributes:
        nodes: (n, 2) node coordinates.
        normals: (n, 2) outward unit normals.
        weights: (n,) positive quadrature weights, sum approximates the perimeter.
        params: (n,) parameter values of the nodes.
        kind: "scatterer" or "proxy".
        center: Reference point of the generating spec.
        signature: Center-free description, equal for rigid translates.
        speed: |x'(t)| at the nodes (scatterers only).
        tangents: x'(t) at the nodes (scatterers only).
        accelerations: x''(t) at the nodes (scatterers only).
        rect: (x_min, x_max, y_min, y_max) for rectangular proxies.
    """

    nodes: FloatArray
    normals: FloatArray
    weights: FloatArray
    params: FloatArray
    kind: Literal["scatterer", "proxy"]
    center: tuple[float, float]
    signature: str
    speed: FloatArray | None = None
    tangents: FloatArray | None = None
    accelerations: FloatArray | None = None
    rect: tuple[float, float, float, float] | None = None
    _fingerprint: str = field(default="", repr=False)

    def __post_init__(self) -> None:
        digest = hashlib.sha256(self.signature.encode()).hexdigest()[:16]
        object.__setattr__(self, "_fingerprint", digest)

    @property
    def n(self) -> int:
        """Node count."""
        return int(self.nodes.shape[0])

    @property
    def fingerprint(self) -> str:
        """Hash of the center-free signature."""
        return self._fingerprint

    @property
    def perimeter(self) -> float:
        """Quadrature approximation of the curve length."""
        return float(self.weights.sum())

    def bounding_box(self) -> tuple[float, float, float, float]:
        """(x_min, x_max, y_min, y_max) of the nodes, or of the rectangle for proxies."""
        if self.rect is not None:
            return self.rect
        return (
            float(self.nodes[:, 0].min()),
            float(self.nodes[:, 0].max()),
            float(self.nodes[:, 1].min()),
            float(self.nodes[:, 1].max()),
        )

    def min_height(self) -> float:
        """Smallest vertical coordinate of the curve."""
        return self.bounding_box()[2]


def _star_derivatives(spec: ShapeSpec, t: FloatArray) -> tuple[FloatArray, FloatArray, FloatArray]:
    amp, omega = spec.amplitude, float(spec.star_frequency)
    r = 1.0 + amp * np.cos(omega * t)
    dr = -amp * omega * np.sin(omega * t)
    ddr = -amp * omega**2 * np.cos(omega * t)
    cos_t, sin_t = np.cos(t), np.sin(t)

    x = np.column_stack((spec.center[0] + spec.a * r * cos_t, spec.center[1] + spec.b * r * sin_t))
    dx = np.column_stack((spec.a * (dr * cos_t - r * sin_t), spec.b * (dr * sin_t + r * cos_t)))
    ddx = np.column_stack(
        (
            spec.a * (ddr * cos_t - 2.0 * dr * sin_t - r * cos_t),
            spec.b * (ddr * sin_t + 2.0 * dr * cos_t - r * sin_t),
        )
    )
    return x, dx, ddx


def discretize_scatterer(spec: ShapeSpec, n: int) -> DiscretizedCurve:
    """Trapezoidal discretization of a scatterer boundary.

    Args:
        spec: Shape to discretize.
        n: Even node count, at least 16.

    Returns:
        Curve with t_j = 2 pi j / n and weights (2 pi / n) |x'(t_j)|.

    Raises:
        ConfigError: If n is odd or too small.
    """
    if n < MIN_SCATTERER_NODES or n % 2:
        raise ConfigError(
            f"Scatterer node count must be even and >= {MIN_SCATTERER_NODES}, got {n}",
            details={"n": n},
        )
    t = 2.0 * np.pi * np.arange(n) / n
    x, dx, ddx = _star_derivatives(spec, t)
    speed = np.hypot(dx[:, 0], dx[:, 1])
    normals = np.column_stack((dx[:, 1], -dx[:, 0])) / speed[:, None]
    return DiscretizedCurve(
        nodes=x,
        normals=normals,
        weights=(2.0 * np.pi / n) * speed,
        params=t,
        kind="scatterer",
        center=spec.center,
        signature=f"scatterer:{spec.relative_signature()}:n={n}",
        speed=speed,
        tangents=dx,
        accelerations=ddx,
    )


def gauss_legendre_panels(a: float, b: float, panels: int, order: int) -> tuple[FloatArray, FloatArray]:
    """Composite Gauss-Legendre nodes and weights on [a, b] (a > b runs backwards)."""
    ref_nodes, ref_weights = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    lo, hi = edges[:-1, None], edges[1:, None]
    nodes = (0.5 * (lo + hi) + 0.5 * (hi - lo) * ref_nodes[None, :]).ravel()
    weights = (0.5 * np.abs(hi - lo) * ref_weights[None, :]).ravel()
    return nodes, weights


def discretize_proxy(spec: RectProxySpec) -> DiscretizedCurve:
    """Panel discretization of a proxy rectangle, counterclockwise from the bottom side.

    The parameter of each node is its arc length from the bottom-left corner.
    """
    x0, x1, y0, y1 = spec.bounds
    q = spec.panel_order
    nh, nv = spec.panels_horizontal, spec.panels_vertical

    bottom, w_b = gauss_legendre_panels(x0, x1, nh, q)
    right, w_r = gauss_legendre_panels(y0, y1, nv, q)
    top, w_t = gauss_legendre_panels(x1, x0, nh, q)
    left, w_l = gauss_legendre_panels(y1, y0, nv, q)

    nodes = np.concatenate(
        (
            np.column_stack((bottom, np.full_like(bottom, y0))),
            np.column_stack((np.full_like(right, x1), right)),
            np.column_stack((top, np.full_like(top, y1))),
            np.column_stack((np.full_like(left, x0), left)),
        )
    )
    normals = np.concatenate(
        (
            np.tile((0.0, -1.0), (bottom.size, 1)),
            np.tile((1.0, 0.0), (right.size, 1)),
            np.tile((0.0, 1.0), (top.size, 1)),
            np.tile((-1.0, 0.0), (left.size, 1)),
        )
    )
    w, h = spec.width, spec.height
    params = np.concatenate((bottom - x0, w + (right - y0), w + h + (x1 - top), 2 * w + h + (y1 - left)))
    return DiscretizedCurve(
        nodes=nodes,
        normals=normals,
        weights=np.concatenate((w_b, w_r, w_t, w_l)),
        params=params,
        kind="proxy",
        center=spec.center,
        signature=f"proxy:{spec.relative_signature()}",
        rect=spec.bounds,
    )
