"""Kernel contexts for the two-layer medium, sized from the geometry."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np

from proxyscat.core.config import get_settings
from proxyscat.core.exceptions import ConfigError, GeometryError
from proxyscat.core.logging import get_logger
from proxyscat.features.geom.curves import DiscretizedCurve
from proxyscat.features.layered.kernels import LayeredContext
from proxyscat.features.layered.sommerfeld import build_sommerfeld_rule
from proxyscat.features.potentials.kernels import KernelContext

logger = get_logger(__name__)


@dataclass(frozen=True)
class GeometryExtent:
    """Bounding box of everything the layered kernels will touch."""

    x_min: float
    x_max: float
    min_height: float
    max_height: float

    @property
    def horizontal_extent(self) -> float:
        """Half the horizontal span."""
        return 0.5 * (self.x_max - self.x_min)

    @classmethod
    def from_curves(cls, curves: Sequence[DiscretizedCurve]) -> GeometryExtent:
        boxes = np.array([c.bounding_box() for c in curves])
        return cls(
            x_min=float(boxes[:, 0].min()),
            x_max=float(boxes[:, 1].max()),
            min_height=float(boxes[:, 2].min()),
            max_height=float(boxes[:, 3].max()),
        )

    @classmethod
    def from_points(cls, *point_sets: Any) -> GeometryExtent:
        pts = np.concatenate([np.atleast_2d(np.asarray(p, dtype=np.float64)) for p in point_sets])
        return cls(
            x_min=float(pts[:, 0].min()),
            x_max=float(pts[:, 0].max()),
            min_height=float(pts[:, 1].min()),
            max_height=float(pts[:, 1].max()),
        )

    def union(self, other: GeometryExtent) -> GeometryExtent:
        return GeometryExtent(
            x_min=min(self.x_min, other.x_min),
            x_max=max(self.x_max, other.x_max),
            min_height=min(self.min_height, other.min_height),
            max_height=max(self.max_height, other.max_height),
        )


def layered_kernel_context(
    k_plus: float,
    k_minus: float,
    sources: GeometryExtent | Sequence[DiscretizedCurve],
    targets: GeometryExtent | None = None,
    tol: float | None = None,
    delta: float | None = None,
    panel_order: int | None = None,
    panel_scale: float = 1.0,
    xi_max: float | None = None,
) -> KernelContext:
    """KernelContext for a two-layer medium.

    Args:
        k_plus: Wavenumber of the upper half-space containing the scatterers.
        k_minus: Wavenumber of the lower half-space.
        sources: Extent (or curves) of every source; its lowest point sets delta.
        targets: Extra evaluation region, e.g. a field grid reaching below the interface.
        tol: Sommerfeld accuracy, defaults to settings.sommerfeld_default_tol.
        delta: Height bound, at most the lowest source height.
        panel_order: Nodes per Sommerfeld panel, defaults to settings.sommerfeld_panel_order.
        panel_scale: Panel width multiplier.
        xi_max: Truncation override.

    Raises:
        GeometryError: If a source touches or crosses the interface.
        ConfigError: If delta exceeds the lowest source height.
    """
    settings = get_settings()
    extent = sources if isinstance(sources, GeometryExtent) else GeometryExtent.from_curves(sources)
    if extent.min_height <= 0:
        raise GeometryError(
            "Scatterers and proxies must lie strictly above the interface",
            details={"min_height": extent.min_height},
        )
    if delta is None:
        delta = extent.min_height
    elif delta > extent.min_height:
        raise ConfigError(
            f"delta={delta} exceeds the lowest source height {extent.min_height}",
            details={"delta": delta, "min_height": extent.min_height},
        )
    full = extent if targets is None else extent.union(targets)
    vertical = max(abs(full.max_height), abs(full.min_height))

    rule = build_sommerfeld_rule(
        k_plus,
        k_minus,
        delta,
        full.horizontal_extent,
        tol=tol if tol is not None else settings.sommerfeld_default_tol,
        vertical_extent=vertical,
        panel_order=panel_order if panel_order is not None else settings.sommerfeld_panel_order,
        panel_scale=panel_scale,
        xi_max=xi_max,
    )
    logger.info(
        "layered.context_built",
        k_plus=k_plus,
        k_minus=k_minus,
        delta=delta,
        quadrature_nodes=rule.size,
    )
    return KernelContext(k=k_plus, layered=LayeredContext(k_plus=k_plus, k_minus=k_minus, rule=rule))
