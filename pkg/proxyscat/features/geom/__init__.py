"""Geometry: scatterer shapes, proxy rectangles and their discretizations.

Exports:
    Schemas:
        - ShapeSpec: Ellipse or star-shaped ellipse
        - RectProxySpec: Rectangular proxy surface with panel layout

    Curves:
        - DiscretizedCurve: Nodes, outward normals and weights on a closed curve
        - discretize_scatterer, discretize_proxy

    Configurations:
        - photonic_lattice, layered_array, two_ellipse_configuration
        - proxy_for, equidistant_margin, panels_for_target
        - check_proxies_disjoint, check_enclosed
"""

from proxyscat.features.geom.curves import (
    DiscretizedCurve,
    discretize_proxy,
    discretize_scatterer,
)
from proxyscat.features.geom.lattices import (
    TwoEllipseConfiguration,
    check_enclosed,
    check_proxies_disjoint,
    equidistant_margin,
    layered_array,
    panels_for_target,
    photonic_lattice,
    proxy_for,
    shape_bounding_box,
    two_ellipse_configuration,
)
from proxyscat.features.geom.schemas import RectProxySpec, ShapeSpec

__all__ = [
    "DiscretizedCurve",
    "RectProxySpec",
    "ShapeSpec",
    "TwoEllipseConfiguration",
    "check_enclosed",
    "check_proxies_disjoint",
    "discretize_proxy",
    "discretize_scatterer",
    "equidistant_margin",
    "layered_array",
    "panels_for_target",
    "photonic_lattice",
    "proxy_for",
    "shape_bounding_box",
    "two_ellipse_configuration",
]
