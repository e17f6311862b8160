"""Multi-particle system assembly and GMRES solve.

With x the net scattered data on every proxy (the obstacle's own outgoing
field plus the fields of all other obstacles, sampled on its proxy), b the
incident data and T the transfer operator,

    (I - (A + I) T) x = A b,

where A is block diagonal with one scattering matrix per obstacle. The system
is solved in weight-scaled variables x~ = sqrt(w) x with right-hand side A~ b~.
"""

from __future__ import annotations

import time
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy.sparse.linalg import LinearOperator  # type: ignore[import-untyped]

from proxyscat.core.config import get_settings
from proxyscat.core.exceptions import DimensionError
from proxyscat.core.logging import get_logger
from proxyscat.features.geom.curves import (
    DiscretizedCurve,
    discretize_proxy,
    discretize_scatterer,
)
from proxyscat.features.geom.lattices import check_enclosed, check_proxies_disjoint
from proxyscat.features.geom.schemas import RectProxySpec, ShapeSpec
from proxyscat.features.linalg.gmres import gmres
from proxyscat.features.multiscat.incident import IncidentField, incident_data
from proxyscat.features.multiscat.state import BoundaryState, ComplexArray, FloatArray
from proxyscat.features.multiscat.transfer import TransferMode, TransferOperator
from proxyscat.features.potentials.kernels import KernelContext, as_context
from proxyscat.features.scatmat.builder import BuildMethod
from proxyscat.features.scatmat.cache import ScatteringMatrixCache
from proxyscat.features.scatmat.matrix import ScatteringMatrix

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class ParticleLayout:
    """Obstacles, their proxies, the medium and the incident field.

    Everything needed to evaluate fields from proxy data; the scattering
    matrices live on MultiParticleSystem.
    """

    shapes: tuple[ShapeSpec, ...]
    proxy_specs: tuple[RectProxySpec, ...]
    scatterers: tuple[DiscretizedCurve, ...]
    proxies: tuple[DiscretizedCurve, ...]
    ctx: KernelContext
    incident: IncidentField

    @property
    def n_particles(self) -> int:
        return len(self.proxies)

    @property
    def block_sizes(self) -> tuple[int, ...]:
        return tuple(p.n for p in self.proxies)

    @property
    def n_total(self) -> int:
        return 2 * sum(self.block_sizes)

    @property
    def sqrt_weights(self) -> FloatArray:
        """sqrt(w) for every entry of a BoundaryState on these proxies."""
        s = [np.sqrt(np.concatenate((p.weights, p.weights))) for p in self.proxies]
        result: FloatArray = np.concatenate(s)
        return result

    def raw(self, state: BoundaryState) -> BoundaryState:
        """State without weight scaling."""
        self._check_layout(state)
        return state.rescaled(self.sqrt_weights, scaled=False)

    def scaled(self, state: BoundaryState) -> BoundaryState:
        """State with weight scaling."""
        self._check_layout(state)
        return state.rescaled(self.sqrt_weights, scaled=True)

    def _check_layout(self, state: BoundaryState) -> None:
        if state.block_sizes != self.block_sizes:
            raise DimensionError(
                "Boundary state layout does not match the proxies",
                details={"state": list(state.block_sizes), "proxies": list(self.block_sizes)},
            )


def build_layout(
    shapes: Sequence[ShapeSpec],
    proxy_specs: Sequence[RectProxySpec],
    n: int | Sequence[int],
    k: float | KernelContext,
    incident: IncidentField,
) -> ParticleLayout:
    """Discretize obstacles and proxies and validate their placement.

    Args:
        shapes: Obstacle shapes.
        proxy_specs: One rectangle per shape.
        n: Nodes per obstacle boundary, shared or per shape.
        k: Wavenumber or kernel context.
        incident: Incident field for the medium.

    Raises:
        DimensionError: If the sequences have different lengths.
        GeometryError: If a proxy does not enclose its obstacle or two proxies intersect.
        ConfigError: On invalid discretization sizes.
    """
    counts = [n] * len(shapes) if isinstance(n, int) else list(n)
    if not (len(shapes) == len(proxy_specs) == len(counts)) or not shapes:
        raise DimensionError(
            "Need one proxy and one node count per obstacle",
            details={"shapes": len(shapes), "proxies": len(proxy_specs), "counts": len(counts)},
        )
    check_proxies_disjoint(list(proxy_specs))
    scatterers = tuple(discretize_scatterer(s, m) for s, m in zip(shapes, counts, strict=True))
    proxies = tuple(discretize_proxy(p) for p in proxy_specs)
    for curve, proxy in zip(scatterers, proxy_specs, strict=True):
        check_enclosed(curve, proxy)
    return ParticleLayout(
        shapes=tuple(shapes),
        proxy_specs=tuple(proxy_specs),
        scatterers=scatterers,
        proxies=proxies,
        ctx=as_context(k),
        incident=incident,
    )


@dataclass(frozen=True, eq=False)
class MultiParticleSystem:
    """Assembled block system, ready for solve.

    Attributes:
        layout: Geometry, medium and incident field.
        matrices: Weight-scaled scattering matrix of every obstacle.
        transfer: Off-diagonal proxy interactions.
        incoming: Raw incident data b on all proxies.
    """

    layout: ParticleLayout
    matrices: tuple[ScatteringMatrix, ...]
    transfer: TransferOperator
    incoming: BoundaryState
    assembly_seconds: float = 0.0
    distinct_matrices: int = 0

    @property
    def n_total(self) -> int:
        return self.layout.n_total

    def apply_scattering(self, v: ComplexArray) -> ComplexArray:
        """Block-diagonal A~ on a scaled vector."""
        state = BoundaryState(np.asarray(v, dtype=np.complex128), self.layout.block_sizes, True)
        out = np.concatenate(
            [a.apply(state.block(i)) for i, a in enumerate(self.matrices)]
        )
        return out

    def apply_transfer(self, v: ComplexArray) -> ComplexArray:
        """T~ = s T s^{-1} on a scaled vector."""
        s = self.layout.sqrt_weights
        raw = BoundaryState(np.asarray(v, dtype=np.complex128) / s, self.layout.block_sizes)
        result: ComplexArray = s * self.transfer.apply(raw).data
        return result

    def matvec(self, v: ComplexArray) -> ComplexArray:
        """v - (A~ + I) T~ v."""
        v = np.asarray(v, dtype=np.complex128).ravel()
        t = self.apply_transfer(v)
        result: ComplexArray = v - self.apply_scattering(t) - t
        return result

    def rhs(self) -> ComplexArray:
        """A~ b~."""
        return self.apply_scattering(self.layout.scaled(self.incoming).data)

    def operator(self) -> LinearOperator:
        n = self.n_total
        return LinearOperator((n, n), matvec=self.matvec, dtype=np.complex128)

    def dense_operator(self) -> ComplexArray:
        """I - (A~ + I) T~ as a dense matrix."""
        s = self.layout.sqrt_weights
        t_scaled = s[:, None] * self.transfer.dense() / s[None, :]
        a_scaled = np.zeros((self.n_total, self.n_total), dtype=np.complex128)
        offsets = self.incoming.offsets
        for i, a in enumerate(self.matrices):
            a_scaled[offsets[i] : offsets[i + 1], offsets[i] : offsets[i + 1]] = a.entries
        result: ComplexArray = np.eye(self.n_total) - (a_scaled + np.eye(self.n_total)) @ t_scaled
        return result


def assemble_system(
    layout: ParticleLayout,
    cache: ScatteringMatrixCache | None = None,
    method: BuildMethod = "composition",
    transfer_mode: TransferMode = "auto",
    threads: int | None = None,
) -> MultiParticleSystem:
    """Build (or reuse) scattering matrices and sample the incident field.

    Args:
        layout: Validated geometry from build_layout.
        cache: Shared matrix cache; a fresh one is used when omitted.
        method: Scattering-matrix construction method.
        transfer_mode: TransferOperator mode.
        threads: Worker threads for transfer applications.
    """
    start = time.perf_counter()
    cache = cache if cache is not None else ScatteringMatrixCache(method=method)
    builds_before = cache.builds
    matrices = tuple(
        cache.get_or_build(curve, proxy, layout.ctx)
        for curve, proxy in zip(layout.scatterers, layout.proxies, strict=True)
    )
    transfer = TransferOperator(layout.proxies, layout.ctx, mode=transfer_mode, threads=threads)
    incoming = incident_data(layout.incident, layout.proxies)
    elapsed = time.perf_counter() - start
    system = MultiParticleSystem(
        layout=layout,
        matrices=matrices,
        transfer=transfer,
        incoming=incoming,
        assembly_seconds=elapsed,
        distinct_matrices=cache.builds - builds_before,
    )
    logger.info(
        "multiscat.system_assembled",
        particles=layout.n_particles,
        n_total=layout.n_total,
        matrices_built=system.distinct_matrices,
        transfer_mode=transfer.mode,
        medium=layout.ctx.medium,
        seconds=round(elapsed, 4),
    )
    return system


@dataclass
class SolveReport:
    """Convergence record of one solve.

    Attributes:
        iterations: GMRES iterations.
        residual_history: Relative (recursive) residuals, starting with the initial one.
        final_residual: Last recursive residual.
        true_residual: Residual recomputed by residual_check.
        n_total: System size.
        seconds: Wall time of the solve.
        transfer_applications: Number of T applications.
    """

    iterations: int
    residual_history: list[float]
    final_residual: float
    true_residual: float
    n_total: int
    seconds: float
    transfer_applications: int
    restarts: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "iterations": self.iterations,
            "residual_history": self.residual_history,
            "final_residual": self.final_residual,
            "true_residual": self.true_residual,
            "n_total": self.n_total,
            "seconds": self.seconds,
            "transfer_applications": self.transfer_applications,
            "restarts": self.restarts,
        }


@dataclass(frozen=True)
class MultiParticleSolution:
    """Weight-scaled net scattered proxy data and its convergence report."""

    state: BoundaryState
    report: SolveReport | None = field(default=None, compare=False)


def solve(
    system: MultiParticleSystem,
    gmres_tol: float | None = None,
    max_iter: int | None = None,
    restart: int | None = None,
) -> MultiParticleSolution:
    """Solve the block system by matrix-free GMRES.

    Raises:
        ConvergenceError: If the residual target is not met in max_iter iterations.
    """
    settings = get_settings()
    tol = gmres_tol if gmres_tol is not None else settings.gmres_default_tol
    iterations = max_iter if max_iter is not None else settings.gmres_default_max_iter
    applications_before = system.transfer.applications
    start = time.perf_counter()

    rhs = system.rhs()
    result = gmres(system.operator(), rhs, tol=tol, max_iter=iterations, restart=restart)
    state = BoundaryState(result.x, system.layout.block_sizes, scaled=True)
    elapsed = time.perf_counter() - start

    report = SolveReport(
        iterations=result.iterations,
        residual_history=result.residual_history,
        final_residual=result.final_residual,
        true_residual=residual_check(system, state),
        n_total=system.n_total,
        seconds=elapsed,
        transfer_applications=system.transfer.applications - applications_before,
        restarts=result.restarts,
    )
    logger.info(
        "multiscat.solve_completed",
        iterations=report.iterations,
        final_residual=report.final_residual,
        true_residual=report.true_residual,
        n_total=report.n_total,
        seconds=round(elapsed, 4),
    )
    return MultiParticleSolution(state=state, report=report)


def residual_check(
    system: MultiParticleSystem, solution: MultiParticleSolution | BoundaryState
) -> float:
    """||(I - (A~+I) T~) x~ - A~ b~|| / ||A~ b~||, recomputed from scratch.

    Returns 0 for a zero right-hand side solved by the zero vector.
    """
    state = solution.state if isinstance(solution, MultiParticleSolution) else solution
    scaled = system.layout.scaled(state)
    rhs = system.rhs()
    residual = float(np.linalg.norm(system.matvec(scaled.data) - rhs))
    norm = float(np.linalg.norm(rhs))
    if norm == 0.0:
        return residual
    return residual / norm
