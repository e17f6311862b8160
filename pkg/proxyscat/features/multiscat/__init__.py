"""Multi-particle scattering through proxy-surface scattering matrices.

Exports:
    - BoundaryState: per-proxy [u; du/dn] blocks
    - PlaneWave, PointSource, incident_data: incident fields sampled on proxies
    - TransferOperator: proxy-to-proxy interactions, dense-cached or matrix-free
    - build_layout, assemble_system, solve, residual_check: the block system
    - eval_field, representation, self_representation, boundary_densities,
      dirichlet_residual: fields and diagnostics
    - MonolithicSolver: direct combined-field reference solve
    - SolutionBundle, save_solution_bundle, load_solution_bundle: solved data on disk
"""

from proxyscat.features.multiscat.field import (
    FieldEvaluation,
    PointMask,
    boundary_densities,
    dirichlet_residual,
    eval_field,
    point_mask,
    representation,
    self_representation,
)
from proxyscat.features.multiscat.incident import (
    IncidentField,
    PlaneWave,
    PointSource,
    incident_data,
    normal_derivative,
)
from proxyscat.features.multiscat.monolithic import MonolithicSolution, MonolithicSolver
from proxyscat.features.multiscat.persistence import (
    SolutionBundle,
    load_solution_bundle,
    save_solution_bundle,
)
from proxyscat.features.multiscat.state import BoundaryState
from proxyscat.features.multiscat.system import (
    MultiParticleSolution,
    MultiParticleSystem,
    ParticleLayout,
    SolveReport,
    assemble_system,
    build_layout,
    residual_check,
    solve,
)
from proxyscat.features.multiscat.transfer import TransferOperator

__all__ = [
    "BoundaryState",
    "FieldEvaluation",
    "IncidentField",
    "MonolithicSolution",
    "MonolithicSolver",
    "MultiParticleSolution",
    "MultiParticleSystem",
    "ParticleLayout",
    "PlaneWave",
    "PointMask",
    "PointSource",
    "SolutionBundle",
    "SolveReport",
    "TransferOperator",
    "assemble_system",
    "boundary_densities",
    "build_layout",
    "dirichlet_residual",
    "eval_field",
    "incident_data",
    "load_solution_bundle",
    "normal_derivative",
    "point_mask",
    "representation",
    "residual_check",
    "save_solution_bundle",
    "self_representation",
    "solve",
]
