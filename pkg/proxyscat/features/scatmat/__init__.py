"""Scattering matrices on proxy surfaces.

Exports:
    - ScatteringMatrix, Provenance: weight-scaled matrix with build provenance
    - build_scattering_matrix: composition or column-by-column construction
    - apply_scattering_matrix: outgoing proxy data from incoming data
    - ScatteringMatrixCache, translate_reuse: reuse across rigid translations
    - write_scattering_matrix, read_scattering_matrix, restore_scattering_matrix: binary storage
"""

from proxyscat.features.scatmat.builder import (
    build_scattering_matrix,
    provenance_for,
    resolution_estimate,
)
from proxyscat.features.scatmat.cache import ScatteringMatrixCache, translate_reuse
from proxyscat.features.scatmat.matrix import (
    Provenance,
    ScatteringMatrix,
    apply_scattering_matrix,
)
from proxyscat.features.scatmat.persistence import (
    ScatteringMatrixFile,
    read_scattering_matrix,
    restore_scattering_matrix,
    write_scattering_matrix,
)

__all__ = [
    "Provenance",
    "ScatteringMatrix",
    "ScatteringMatrixCache",
    "ScatteringMatrixFile",
    "apply_scattering_matrix",
    "build_scattering_matrix",
    "provenance_for",
    "read_scattering_matrix",
    "resolution_estimate",
    "restore_scattering_matrix",
    "translate_reuse",
    "write_scattering_matrix",
]
