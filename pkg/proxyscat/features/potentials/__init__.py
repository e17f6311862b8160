"""Helmholtz layer potentials: kernels, singular self operators and the combined-field solver.

Exports:
    Kernels:
        - LayerKind: S, D, S', D'
        - KernelContext: Wavenumber plus optional layered-medium correction
        - MediumCorrection: Protocol implemented by the layered medium
        - free_kernel_matrix, kernel_matrix, gk, gk_gradient_x, gk_gradient_y

    Layer potentials:
        - PotentialMatrix, layer_matrix, layer_matrices, potential_at
        - self_operator: Kress log-quadrature S and D on a curve

    Combined field:
        - solve_combined_field, eval_scattered, combined_field_matrix
        - disk_scattered_field: Exact series for the sound-soft disk
"""

from proxyscat.features.potentials.combined import (
    ScatteredField,
    combined_field_matrix,
    disk_scattered_field,
    eval_scattered,
    solve_combined_field,
)
from proxyscat.features.potentials.kernels import (
    KernelContext,
    LayerKind,
    MediumCorrection,
    as_context,
    free_kernel_matrix,
    gk,
    gk_gradient_x,
    gk_gradient_y,
    gk_mixed_normal,
    kernel_matrix,
)
from proxyscat.features.potentials.layer import (
    PotentialMatrix,
    layer_matrices,
    layer_matrix,
    potential_at,
)
from proxyscat.features.potentials.selfop import kress_log_weights, self_operator

__all__ = [
    "KernelContext",
    "LayerKind",
    "MediumCorrection",
    "PotentialMatrix",
    "ScatteredField",
    "as_context",
    "combined_field_matrix",
    "disk_scattered_field",
    "eval_scattered",
    "free_kernel_matrix",
    "gk",
    "gk_gradient_x",
    "gk_gradient_y",
    "gk_mixed_normal",
    "kernel_matrix",
    "kress_log_weights",
    "layer_matrices",
    "layer_matrix",
    "potential_at",
    "self_operator",
    "solve_combined_field",
]
