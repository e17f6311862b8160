"""Two-layer medium: Sommerfeld quadrature, interface corrections and incident field.

Exports:
    - build_sommerfeld_rule, SommerfeldRule, branch_sqrt
    - LayeredContext: k_plus, k_minus and the rule; provides s_plus, s_minus
    - layered_kernel_context, GeometryExtent: contexts sized from the geometry
    - sommerfeld_far_apply: corrections summed over many sources at once
    - LayeredPlaneWave, layered_incident
"""

from proxyscat.features.layered.context import GeometryExtent, layered_kernel_context
from proxyscat.features.layered.far import FarCorrection, sommerfeld_far_apply, spectral_density
from proxyscat.features.layered.incident import LayeredPlaneWave, layered_incident
from proxyscat.features.layered.kernels import LayeredContext, SommerfeldValue
from proxyscat.features.layered.sommerfeld import (
    SommerfeldRule,
    branch_sqrt,
    build_sommerfeld_rule,
)

__all__ = [
    "FarCorrection",
    "GeometryExtent",
    "LayeredContext",
    "LayeredPlaneWave",
    "SommerfeldRule",
    "SommerfeldValue",
    "branch_sqrt",
    "build_sommerfeld_rule",
    "layered_incident",
    "layered_kernel_context",
    "sommerfeld_far_apply",
    "spectral_density",
]
