"""Configuration generators: proxy placement, lattices and validation.

Lattice generators return plain lists of ShapeSpec; proxies are derived from
shapes with proxy_for and validated with check_proxies_disjoint and check_enclosed.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Literal

import numpy as np
from scipy.optimize import minimize_scalar

from proxyscat.core.exceptions import ConfigError, GeometryError
from proxyscat.core.logging import get_logger
from proxyscat.features.geom.curves import DiscretizedCurve
from proxyscat.features.geom.schemas import RectProxySpec, ShapeSpec

logger = get_logger(__name__)

PHOTONIC_SEMI_AXES = (0.05 / 3, 0.1 / 3)
PHOTONIC_SIZE = (41, 21)
LAYERED_SEMI_AXES = (1.0, 0.5)
LAYERED_ROW_COUNTS = (21, 20)

_BBOX_SAMPLES = 4096


def _waveguide_channel(i_count: int, j_count: int) -> set[tuple[int, int]]:
    """L-shaped channel: row j = 11 for i <= 24, then column i = 24 for j >= 12."""
    removed = {(i, 11) for i in range(1, 25)} | {(24, j) for j in range(12, 22)}
    return {(i, j) for i, j in removed if i <= i_count and j <= j_count}


def photonic_lattice(
    i_count: int = PHOTONIC_SIZE[0],
    j_count: int = PHOTONIC_SIZE[1],
    stagger: Literal["column", "row"] = "column",
    remove_channel: bool = True,
) -> list[ShapeSpec]:
    """Staggered lattice of star ellipses with a waveguide channel cut out.

    Centers are (-1 + (i-1) 0.05, y0 + (j-1) 0.1) with y0 = -0.95 or -1 depending
    on the parity of i (stagger="column") or j (stagger="row"). Odd indices get -0.95.

    Args:
        i_count: Columns kept, 1..41.
        j_count: Rows kept, 1..21.
        stagger: Index whose parity selects the half-row offset.
        remove_channel: Drop the L-shaped channel entries.

    Returns:
        Shapes ordered by i then j.

    Raises:
        ConfigError: If the sub-lattice size is outside the full lattice.
    """
    if not (1 <= i_count <= PHOTONIC_SIZE[0] and 1 <= j_count <= PHOTONIC_SIZE[1]):
        raise ConfigError(
            f"Photonic sub-lattice must be within {PHOTONIC_SIZE}, got ({i_count}, {j_count})",
            details={"i_count": i_count, "j_count": j_count},
        )
    removed = _waveguide_channel(i_count, j_count) if remove_channel else set()
    a, b = PHOTONIC_SEMI_AXES

    shapes = []
    for i in range(1, i_count + 1):
        for j in range(1, j_count + 1):
            if (i, j) in removed:
                continue
            parity_index = i if stagger == "column" else j
            y0 = -0.95 if parity_index % 2 else -1.0
            center = (-1.0 + (i - 1) * 0.05, y0 + (j - 1) * 0.1)
            shapes.append(ShapeSpec(kind="star_ellipse", a=a, b=b, center=center))

    logger.info("geom.photonic_lattice_generated", count=len(shapes), removed=len(removed))
    return shapes


def layered_array(
    seed: int = 0,
    perturbation: float = 0.1,
    spacing_rule: Literal["scaled", "offset"] = "scaled",
    row_counts: tuple[int, int] = LAYERED_ROW_COUNTS,
) -> list[ShapeSpec]:
    """Two rows of perturbed star ellipses above the interface.

    Row 1 sits at height 1.6 with x = (-10 + (i-1)) 3 ("scaled") or -10 + 3(i-1)
    ("offset"); row 2 sits at 3.6 with -9.5 in place of -10. Each center gets
    uniform perturbations in [-perturbation, perturbation] drawn from PCG64(seed),
    horizontal then vertical, row 1 first.

    Raises:
        ConfigError: If perturbation is negative or a row count is out of range.
    """
    if perturbation < 0:
        raise ConfigError(f"perturbation must be >= 0, got {perturbation}")
    if not all(0 <= n <= full for n, full in zip(row_counts, LAYERED_ROW_COUNTS, strict=True)):
        raise ConfigError(
            f"row_counts must be within {LAYERED_ROW_COUNTS}, got {row_counts}",
            details={"row_counts": list(row_counts)},
        )
    rng = np.random.Generator(np.random.PCG64(seed))
    a, b = LAYERED_SEMI_AXES

    shapes = []
    for start, height, count in ((-10.0, 1.6, row_counts[0]), (-9.5, 3.6, row_counts[1])):
        for i in range(1, count + 1):
            if spacing_rule == "scaled":
                x = (start + (i - 1)) * 3.0
            else:
                x = start + (i - 1) * 3.0
            eta = rng.uniform(-perturbation, perturbation, size=2)
            shapes.append(
                ShapeSpec(kind="star_ellipse", a=a, b=b, center=(x + eta[0], height + eta[1]))
            )

    logger.info("geom.layered_array_generated", count=len(shapes), seed=seed)
    return shapes


@lru_cache(maxsize=256)
def _relative_half_extents(spec: ShapeSpec) -> tuple[float, float, float, float]:
    """Bounding box of the shape relative to its center, (x_min, x_max, y_min, y_max)."""
    if spec.amplitude == 0.0:
        return (-spec.a, spec.a, -spec.b, spec.b)

    def offset(t: float, axis: int) -> float:
        r = float(spec.radius(np.asarray(t)))
        return r * (spec.a * np.cos(t) if axis == 0 else spec.b * np.sin(t))

    t = np.linspace(0.0, 2.0 * np.pi, _BBOX_SAMPLES, endpoint=False)
    dt = t[1]
    r = spec.radius(t)
    extents = []
    for axis, samples in ((0, spec.a * r * np.cos(t)), (1, spec.b * r * np.sin(t))):
        for sign in (-1.0, 1.0):
            t0 = float(t[np.argmax(sign * samples)])
            res = minimize_scalar(
                lambda s, ax=axis, sg=sign: -sg * offset(s, ax),
                bounds=(t0 - dt, t0 + dt),
                method="bounded",
                options={"xatol": 1e-13},
            )
            extents.append(offset(float(res.x), axis))
    return (extents[0], extents[1], extents[2], extents[3])


def shape_bounding_box(spec: ShapeSpec) -> tuple[float, float, float, float]:
    """(x_min, x_max, y_min, y_max) of the shape."""
    x0, x1, y0, y1 = _relative_half_extents(spec.model_copy(update={"center": (0.0, 0.0)}))
    cx, cy = spec.center
    return (cx + x0, cx + x1, cy + y0, cy + y1)


def panels_for_target(width: float, height: float, n_p: int, order: int = 16) -> tuple[int, int]:
    """Split a node budget into (panels_horizontal, panels_vertical) proportional to side length.

    Raises:
        ConfigError: If n_p is below one panel per side.
    """
    total = round(n_p / (2 * order))
    if total < 2:
        raise ConfigError(f"n_p={n_p} is below one panel per side at order {order}")
    horizontal = min(total - 1, max(1, round(total * width / (width + height))))
    return horizontal, total - horizontal


def proxy_for(
    spec: ShapeSpec,
    margin: float,
    panels_horizontal: int = 1,
    panels_vertical: int = 1,
    panel_order: int = 16,
    n_p: int | None = None,
) -> RectProxySpec:
    """Rectangle around the shape's bounding box with the given margin on every side.

    When n_p is given, the panel counts come from panels_for_target.

    Raises:
        ConfigError: If margin is not positive.
    """
    if margin <= 0:
        raise ConfigError(f"Proxy margin must be > 0, got {margin}", details={"margin": margin})
    x0, x1, y0, y1 = _relative_half_extents(spec.model_copy(update={"center": (0.0, 0.0)}))
    width, height = x1 - x0 + 2 * margin, y1 - y0 + 2 * margin
    if n_p is not None:
        panels_horizontal, panels_vertical = panels_for_target(width, height, n_p, panel_order)
    return RectProxySpec(
        center=(spec.center[0] + 0.5 * (x0 + x1), spec.center[1] + 0.5 * (y0 + y1)),
        width=width,
        height=height,
        panels_horizontal=panels_horizontal,
        panels_vertical=panels_vertical,
        panel_order=panel_order,
    )


def _box_gaps(boxes: np.ndarray[Any, Any]) -> tuple[np.ndarray[Any, Any], np.ndarray[Any, Any]]:
    """Pairwise horizontal and vertical gaps between boxes (negative when overlapping)."""
    gx = np.maximum(boxes[None, :, 0] - boxes[:, None, 1], boxes[:, None, 0] - boxes[None, :, 1])
    gy = np.maximum(boxes[None, :, 2] - boxes[:, None, 3], boxes[:, None, 2] - boxes[None, :, 3])
    return gx, gy


def equidistant_margin(shapes: Sequence[ShapeSpec]) -> float:
    """Margin at which neighbouring proxies are as far apart as each proxy is from its scatterer.

    For a pair separated by a bounding-box gap g the proxies stay g - 2m apart,
    which equals m at m = g / 3. The smallest such value over all pairs is returned.

    Raises:
        ConfigError: If fewer than two shapes are given.
        GeometryError: If two bounding boxes touch or overlap.
    """
    if len(shapes) < 2:
        raise ConfigError("equidistant_margin needs at least two shapes")
    boxes = np.array([shape_bounding_box(s) for s in shapes])
    gx, gy = _box_gaps(boxes)
    gap = np.maximum(gx, gy)
    np.fill_diagonal(gap, np.inf)
    smallest = float(gap.min())
    if smallest <= 0:
        i, j = np.unravel_index(int(np.argmin(gap)), gap.shape)
        raise GeometryError(
            "Scatterer bounding boxes overlap",
            details={"pair": [int(i), int(j)]},
        )
    return smallest / 3.0


def check_proxies_disjoint(proxies: Sequence[RectProxySpec] | Sequence[DiscretizedCurve]) -> None:
    """Require a positive gap between every pair of proxy rectangles, given as specs or curves.

    Raises:
        GeometryError: On the first overlapping or touching pair.
    """
    if len(proxies) < 2:
        return
    boxes = np.array(
        [p.bounding_box() if isinstance(p, DiscretizedCurve) else p.bounds for p in proxies]
    )
    gx, gy = _box_gaps(boxes)
    separated = (gx > 0) | (gy > 0)
    np.fill_diagonal(separated, True)
    if not separated.all():
        i, j = (int(v) for v in np.argwhere(~separated)[0])
        raise GeometryError(
            f"Proxy surfaces {i} and {j} intersect",
            details={"pair": [i, j], "bounds": [list(boxes[i]), list(boxes[j])]},
        )


def check_enclosed(curve: DiscretizedCurve, proxy: RectProxySpec | DiscretizedCurve) -> float:
    """Require every scatterer node strictly inside the proxy rectangle.

    The proxy may be given as a spec or as a discretized rectangle.

    Returns:
        Minimum distance from the nodes to the rectangle boundary.

    Raises:
        GeometryError: If a node lies on or outside the rectangle.
    """
    if isinstance(proxy, DiscretizedCurve):
        if proxy.rect is None:
            raise GeometryError("Proxy curve is not a rectangle")
        bounds = proxy.rect
    else:
        bounds = proxy.bounds
    x0, x1, y0, y1 = bounds
    p = curve.nodes
    distance = np.minimum.reduce([p[:, 0] - x0, x1 - p[:, 0], p[:, 1] - y0, y1 - p[:, 1]])
    clearance = float(distance.min())
    if clearance <= 0:
        raise GeometryError(
            "Scatterer is not strictly enclosed by its proxy surface",
            details={"clearance": clearance, "proxy_bounds": list(bounds)},
        )
    return clearance


@dataclass(frozen=True)
class TwoEllipseConfiguration:
    """Two vertically stacked ellipses and their proxies."""

    shapes: tuple[ShapeSpec, ShapeSpec]
    proxies: tuple[RectProxySpec, RectProxySpec]


def two_ellipse_configuration(
    a: float,
    d: float,
    layered: bool = False,
    side_rule: Literal["margin", "printed"] = "margin",
    panels_horizontal: int = 1,
    panels_vertical: int = 1,
    panel_order: int = 16,
) -> TwoEllipseConfiguration:
    """Ellipses with semi-axes (a/2, 1/2) separated by a vertical gap d.

    Centers are (0, 0) and (0, 1 + d), or (0, 2) and (0, 3 + d) when layered.
    Proxy sides are a + 2d/3 by 1 + 2d/3 ("margin") or 2a + 2d/3 by 2 + 2d/3 ("printed").

    Raises:
        ConfigError: If a or d is not positive.
        GeometryError: If the resulting proxies intersect.
    """
    if a <= 0 or d <= 0:
        raise ConfigError(f"a and d must be > 0, got a={a}, d={d}")
    base = 2.0 if layered else 0.0
    centers = ((0.0, base), (0.0, base + 1.0 + d))
    shapes = tuple(ShapeSpec(kind="ellipse", a=a / 2, b=0.5, center=c) for c in centers)
    if side_rule == "margin":
        width, height = a + 2 * d / 3, 1.0 + 2 * d / 3
    else:
        width, height = 2 * a + 2 * d / 3, 2.0 + 2 * d / 3
    proxies = tuple(
        RectProxySpec(
            center=c,
            width=width,
            height=height,
            panels_horizontal=panels_horizontal,
            panels_vertical=panels_vertical,
            panel_order=panel_order,
        )
        for c in centers
    )
    check_proxies_disjoint(proxies)
    return TwoEllipseConfiguration(shapes=(shapes[0], shapes[1]), proxies=(proxies[0], proxies[1]))
