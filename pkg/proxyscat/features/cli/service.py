"""Command drivers: scattering-matrix build, solve, convergence sweep and field grid.

Orchestrates:
- Resolving a manifest into obstacles, proxies, medium and incident field
- Validating the geometry before any matrix is built
- Running the multi-particle pipeline and its reference solves
- Writing matrices, bundles and CSV tables into the output directory

Every driver returns a CommandResult; turning it into a RunReport and mapping
failures to exit codes is left to the entry point.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from proxyscat.core.exceptions import ConfigError, GeometryError
from proxyscat.core.logging import get_logger
from proxyscat.features.cli.reports import (
    CONVERGENCE_COLUMNS,
    PhaseTimer,
    field_frame,
    relative_gap,
    write_csv,
)
from proxyscat.features.cli.schemas import (
    FreeMedium,
    LayeredPlaneWaveIncident,
    PointSourceIncident,
    ReferenceConfig,
    RunConfig,
)
from proxyscat.features.geom.curves import DiscretizedCurve, discretize_proxy, discretize_scatterer
from proxyscat.features.geom.lattices import (
    check_proxies_disjoint,
    equidistant_margin,
    layered_array,
    panels_for_target,
    photonic_lattice,
    proxy_for,
    two_ellipse_configuration,
)
from proxyscat.features.geom.schemas import RectProxySpec, ShapeSpec
from proxyscat.features.layered.context import GeometryExtent, layered_kernel_context
from proxyscat.features.layered.incident import layered_incident
from proxyscat.features.multiscat.field import dirichlet_residual, eval_field
from proxyscat.features.multiscat.incident import IncidentField, PlaneWave, PointSource
from proxyscat.features.multiscat.monolithic import MonolithicSolver
from proxyscat.features.multiscat.persistence import (
    SolutionBundle,
    load_solution_bundle,
    save_solution_bundle,
)
from proxyscat.features.multiscat.system import (
    MultiParticleSolution,
    MultiParticleSystem,
    ParticleLayout,
    assemble_system,
    build_layout,
    solve,
)
from proxyscat.features.potentials.kernels import KernelContext
from proxyscat.features.scatmat.builder import build_scattering_matrix
from proxyscat.features.scatmat.cache import ScatteringMatrixCache
from proxyscat.features.scatmat.persistence import (
    read_scattering_matrix,
    restore_scattering_matrix,
    write_scattering_matrix,
)

logger = get_logger(__name__)

FloatArray = np.ndarray[Any, np.dtype[np.float64]]
ComplexArray = np.ndarray[Any, np.dtype[np.complex128]]


@dataclass
class CommandResult:
    """What a driver produced.

    Attributes:
        metrics: Command-specific results for the report.
        outputs: Written artifacts by role.
        timings: Wall time per phase in seconds.
    """

    metrics: dict[str, Any] = field(default_factory=lambda: {})
    outputs: dict[str, str] = field(default_factory=lambda: {})
    timings: dict[str, float] = field(default_factory=lambda: {})


@dataclass(frozen=True)
class ResolvedGeometry:
    """Obstacles and proxy rectangles, validated but not discretized."""

    shapes: tuple[ShapeSpec, ...]
    proxies: tuple[RectProxySpec, ...]


@dataclass(frozen=True)
class SolvedRun:
    """A finished multi-particle solve."""

    system: MultiParticleSystem
    solution: MultiParticleSolution

    @property
    def layout(self) -> ParticleLayout:
        return self.system.layout


# =============================================================================
# Manifest resolution
# =============================================================================


def _shapes(config: RunConfig) -> list[ShapeSpec]:
    geometry = config.geometry
    if geometry.kind == "shapes":
        return list(geometry.shapes)
    if geometry.kind == "disk":
        r = geometry.radius
        return [ShapeSpec(kind="ellipse", a=r, b=r, center=geometry.center)]
    if geometry.kind == "photonic":
        return photonic_lattice(
            geometry.i_count, geometry.j_count, geometry.stagger, geometry.remove_channel
        )
    if geometry.kind == "layered_array":
        return layered_array(
            seed=geometry.seed,
            perturbation=geometry.perturbation,
            spacing_rule=geometry.spacing_rule,
            row_counts=geometry.row_counts,
        )
    raise ConfigError(f"Geometry {geometry.kind} does not resolve to a shape list")


def resolve_geometry(config: RunConfig) -> ResolvedGeometry:
    """Obstacles and proxies from the geometry and proxy blocks.

    Raises:
        ConfigError: If a single obstacle has no explicit margin.
        GeometryError: If proxies intersect or reach the interface of a layered medium.
    """
    settings = config.proxy
    if config.geometry.kind == "two_ellipse":
        pair = two_ellipse_configuration(
            config.geometry.a,
            config.geometry.d,
            layered=config.medium.kind == "layered",
            side_rule=config.geometry.side_rule,
            panels_horizontal=settings.panels_horizontal,
            panels_vertical=settings.panels_vertical,
            panel_order=settings.panel_order,
        )
        shapes, proxies = list(pair.shapes), list(pair.proxies)
        if settings.n_p is not None:
            proxies = [_with_budget(p, settings.n_p) for p in proxies]
    else:
        shapes = _shapes(config)
        if settings.margin is not None:
            margin = settings.margin
        elif len(shapes) > 1:
            margin = equidistant_margin(shapes)
        else:
            raise ConfigError("proxy.margin is required for a single obstacle")
        proxies = [
            proxy_for(
                s,
                margin,
                settings.panels_horizontal,
                settings.panels_vertical,
                settings.panel_order,
                n_p=settings.n_p,
            )
            for s in shapes
        ]

    check_proxies_disjoint(proxies)
    if config.medium.kind == "layered":
        lowest = min(p.bounds[2] for p in proxies)
        if lowest <= 0.0:
            raise GeometryError(
                "Proxy surfaces must lie strictly above the interface",
                details={"min_height": lowest},
            )
    logger.info(
        "cli.geometry_resolved",
        geometry=config.geometry.kind,
        obstacles=len(shapes),
        n_p=max(p.n_p for p in proxies),
    )
    return ResolvedGeometry(shapes=tuple(shapes), proxies=tuple(proxies))


def _with_budget(proxy: RectProxySpec, n_p: int) -> RectProxySpec:
    horizontal, vertical = panels_for_target(proxy.width, proxy.height, n_p, proxy.panel_order)
    return proxy.model_copy(update={"panels_horizontal": horizontal, "panels_vertical": vertical})


def kernel_context(
    config: RunConfig, proxies: Sequence[DiscretizedCurve], targets: Any = None
) -> float | KernelContext:
    """Wavenumber for free space, a Sommerfeld-backed context for the layered medium.

    Args:
        config: Run manifest.
        proxies: Discretized proxies; they bound every source.
        targets: Evaluation points the layered rule must also cover.
    """
    medium = config.medium
    if isinstance(medium, FreeMedium):
        return medium.k
    pts = None if targets is None else np.asarray(targets, dtype=np.float64).reshape(-1, 2)
    extent = GeometryExtent.from_points(pts) if pts is not None and len(pts) else None
    return layered_kernel_context(
        medium.k_plus,
        medium.k_minus,
        proxies,
        targets=extent,
        tol=medium.sommerfeld_tol,
        delta=medium.delta,
    )


def incident_field(config: RunConfig) -> IncidentField:
    """Incident field of the manifest in its medium."""
    incident = config.incident
    if isinstance(incident, LayeredPlaneWaveIncident):
        medium = config.medium
        if isinstance(medium, FreeMedium):
            raise ConfigError("layered_plane_wave needs a layered medium")
        return layered_incident(incident.theta, medium.k_plus, medium.k_minus)
    if isinstance(incident, PointSourceIncident):
        return PointSource(k=config.k, source=incident.source)
    return PlaneWave(k=config.k, angle=incident.angle)


def prepare_layout(config: RunConfig, targets: Any = None) -> ParticleLayout:
    """Discretized, validated layout for a manifest."""
    geometry = resolve_geometry(config)
    proxy_curves = [discretize_proxy(p) for p in geometry.proxies]
    ctx = kernel_context(config, proxy_curves, targets)
    return build_layout(
        geometry.shapes,
        geometry.proxies,
        config.discretization.n,
        ctx,
        incident_field(config),
    )


def run_solve(
    config: RunConfig,
    targets: Any = None,
    threads: int = 1,
    cache: ScatteringMatrixCache | None = None,
) -> SolvedRun:
    """Assemble and solve the multi-particle system of a manifest."""
    layout = prepare_layout(config, targets)
    cache = cache if cache is not None else ScatteringMatrixCache(method=config.solver.method)
    system = assemble_system(
        layout,
        cache=cache,
        transfer_mode=config.solver.transfer_mode,
        threads=threads,
    )
    solution = solve(
        system,
        gmres_tol=config.solver.gmres_tol,
        max_iter=config.solver.max_iter,
        restart=config.solver.restart,
    )
    return SolvedRun(system=system, solution=solution)


def _refined(config: RunConfig, reference: ReferenceConfig) -> RunConfig:
    proxy = config.proxy
    if reference.n_p_ref is not None:
        proxy = proxy.model_copy(update={"n_p": reference.n_p_ref})
    elif proxy.n_p is not None:
        proxy = proxy.model_copy(update={"n_p": 2 * proxy.n_p})
    else:
        proxy = proxy.model_copy(
            update={
                "panels_horizontal": 2 * proxy.panels_horizontal,
                "panels_vertical": 2 * proxy.panels_vertical,
            }
        )
    update: dict[str, Any] = {"proxy": proxy}
    if reference.n_ref is not None:
        update["discretization"] = config.discretization.model_copy(update={"n": reference.n_ref})
    return config.model_copy(update=update)


def reference_field(
    config: RunConfig,
    layout: ParticleLayout,
    points: FloatArray,
    threads: int = 1,
) -> ComplexArray:
    """Scattered field of the reference solution at points outside every proxy.

    Monolithic references reuse the layout's medium and obstacles (rediscretized
    when n_ref is set); refined references rerun the proxy method.
    """
    reference = config.reference or ReferenceConfig()
    if reference.kind == "monolithic":
        curves = (
            list(layout.scatterers)
            if reference.n_ref is None
            else [discretize_scatterer(s, reference.n_ref) for s in layout.shapes]
        )
        solver = MonolithicSolver(curves, layout.ctx)
        return solver.scattered(solver.solve(layout.incident), points)
    refined = run_solve(_refined(config, reference), points, threads)
    return eval_field(refined.system, refined.solution, points).scattered


def _resolve_path(out_dir: Path, name: str) -> Path:
    path = Path(name)
    return path if path.is_absolute() else out_dir / path


# =============================================================================
# Commands
# =============================================================================


def cmd_scatmat_build(config: RunConfig, out_dir: Path) -> CommandResult:
    """Build the scattering matrix of the first obstacle and write it as PSCM."""
    timer = PhaseTimer()
    with timer.phase("geometry"):
        geometry = resolve_geometry(config)
        scatterer = discretize_scatterer(geometry.shapes[0], config.discretization.n)
        proxy = discretize_proxy(geometry.proxies[0])
        ctx = kernel_context(config, [proxy])
    with timer.phase("build"):
        matrix = build_scattering_matrix(scatterer, proxy, ctx, method=config.solver.method)
    with timer.phase("write"):
        path = write_scattering_matrix(matrix, _resolve_path(out_dir, config.output.matrix_file))

    return CommandResult(
        metrics={
            "n_p": matrix.n_p,
            "n_gamma": scatterer.n,
            "method": config.solver.method,
            "medium": matrix.medium,
            "wavenumbers": list(matrix.wavenumbers),
            "build_seconds": matrix.build_seconds,
            "resolution_estimate": matrix.resolution_estimate,
            "provenance": matrix.provenance.to_dict(),
        },
        outputs={"scattering_matrix": str(path)},
        timings=timer.timings,
    )


def cmd_solve(config: RunConfig, out_dir: Path, threads: int = 1) -> CommandResult:
    """Full multi-particle pipeline: solve, field at probes and grid, bundle and report."""
    timer = PhaseTimer()
    points = config.output.points()
    outputs: dict[str, str] = {}

    with timer.phase("assembly"):
        layout = prepare_layout(config, points)
        cache = ScatteringMatrixCache(method=config.solver.method)
        if config.scattering_matrix is not None:
            stored_path = _resolve_path(out_dir, config.scattering_matrix)
            if not stored_path.exists():
                raise ConfigError(
                    f"Scattering matrix file not found: {stored_path}",
                    details={"path": str(stored_path)},
                )
            stored = read_scattering_matrix(stored_path)
            cache.insert(
                restore_scattering_matrix(stored, layout.scatterers[0], layout.proxies[0], layout.ctx)
            )
        system = assemble_system(
            layout, cache=cache, transfer_mode=config.solver.transfer_mode, threads=threads
        )
    with timer.phase("solve"):
        solution = solve(
            system,
            gmres_tol=config.solver.gmres_tol,
            max_iter=config.solver.max_iter,
            restart=config.solver.restart,
        )
    report = solution.report
    metrics: dict[str, Any] = {
        "particles": layout.n_particles,
        "n_total": system.n_total,
        "n_p_max": max(layout.block_sizes),
        "distinct_matrices": system.distinct_matrices,
        "cache_hits": cache.hits,
        "transfer_mode": system.transfer.mode,
        **(report.to_dict() if report is not None else {}),
    }

    if config.solver.dirichlet_check:
        with timer.phase("diagnostics"):
            metrics["dirichlet_residual"] = dirichlet_residual(system, solution)

    if len(points):
        with timer.phase("field"):
            evaluation = eval_field(system, solution, points)
            path = write_csv(field_frame(evaluation), _resolve_path(out_dir, config.output.field_file))
        outputs["field"] = str(path)
        metrics["exterior_points"] = int(evaluation.exterior.sum())
        metrics["masked_points"] = int((~evaluation.exterior).sum())
        if config.reference is not None:
            if not evaluation.exterior.any():
                raise ConfigError("Error estimates need probe or grid points outside every proxy")
            with timer.phase("reference"):
                outside = points[evaluation.exterior]
                reference = reference_field(config, layout, outside, threads)
            metrics["error_estimate"] = {
                "kind": config.reference.kind,
                "value": relative_gap(evaluation.scattered[evaluation.exterior], reference),
            }

    with timer.phase("bundle"):
        bundle = SolutionBundle(
            state=solution.state,
            config=config.model_dump(mode="json"),
            report=report.to_dict() if report is not None else {},
        )
        path = save_solution_bundle(bundle, _resolve_path(out_dir, config.output.bundle_file))
    outputs["bundle"] = str(path)
    metrics["bundle_hash"] = bundle.bundle_hash

    return CommandResult(metrics=metrics, outputs=outputs, timings=timer.timings)


def cmd_convergence(config: RunConfig, out_dir: Path, threads: int = 1) -> CommandResult:
    """Error against the reference for every sweep value and node budget.

    Raises:
        ConfigError: Without a sweep block or without probes outside the proxies.
    """
    sweep = config.sweep
    if sweep is None:
        raise ConfigError("The convergence command needs a sweep block")
    probes = np.asarray(config.output.probes, dtype=np.float64).reshape(-1, 2)
    if not len(probes):
        raise ConfigError("The convergence command needs output.probes")
    reference_config = config.reference or ReferenceConfig(kind="monolithic")
    if reference_config.kind == "refined" and reference_config.n_p_ref is None:
        reference_config = reference_config.model_copy(
            update={"n_p_ref": 2 * sweep.n_p_values[-1]}
        )

    timer = PhaseTimer()
    rows: list[dict[str, Any]] = []
    required: dict[str, int | None] = {}
    for value in sweep.values:
        swept = config.with_sweep_value(sweep.parameter, value).model_copy(
            update={"reference": reference_config}
        )
        reference: ComplexArray | None = None
        hit: int | None = None
        for n_p in sweep.n_p_values:
            with timer.phase("solve"):
                run = run_solve(swept.with_n_p(n_p), probes, threads)
                evaluation = eval_field(run.system, run.solution, probes)
            # proxy rectangles do not depend on n_p, so neither does the mask
            exterior = evaluation.exterior
            if not exterior.any():
                raise ConfigError("Every probe lies inside a proxy surface")
            if reference is None:
                with timer.phase("reference"):
                    reference = reference_field(swept, run.layout, probes[exterior], threads)
            epsilon = relative_gap(evaluation.scattered[exterior], reference)
            report = run.solution.report
            n_p_actual = max(run.layout.block_sizes)
            rows.append(
                {
                    "parameter": sweep.parameter,
                    "value": value,
                    "n_p": n_p_actual,
                    "epsilon": epsilon,
                    "iterations": report.iterations if report is not None else 0,
                    "final_residual": report.final_residual if report is not None else 0.0,
                    "solve_seconds": report.seconds if report is not None else 0.0,
                }
            )
            if hit is None and epsilon <= sweep.tolerance:
                hit = n_p_actual
            logger.info(
                "cli.convergence_point",
                parameter=sweep.parameter,
                value=value,
                n_p=n_p_actual,
                epsilon=epsilon,
            )
        required[repr(value)] = hit

    frame = pd.DataFrame(rows, columns=CONVERGENCE_COLUMNS)
    path = write_csv(frame, _resolve_path(out_dir, config.output.convergence_file))
    return CommandResult(
        metrics={
            "parameter": sweep.parameter,
            "reference": reference_config.kind,
            "tolerance": sweep.tolerance,
            "required_n_p": required,
            "points": len(rows),
        },
        outputs={"convergence": str(path)},
        timings=timer.timings,
    )


def cmd_fieldgrid(config: RunConfig, out_dir: Path) -> CommandResult:
    """Evaluate a finished solve on the manifest's grid.

    The obstacles, medium and incident field come from the manifest stored in
    the solution bundle; only the grid comes from the given manifest.

    Raises:
        ConfigError: Without a grid block or without a bundle in out_dir.
    """
    grid = config.output.grid
    if grid is None:
        raise ConfigError("The fieldgrid command needs output.grid")
    bundle_path = _resolve_path(out_dir, config.output.bundle_file)
    if not bundle_path.exists():
        raise ConfigError(
            f"No solution bundle at {bundle_path}; run solve first",
            details={"path": str(bundle_path)},
        )

    timer = PhaseTimer()
    with timer.phase("load"):
        try:
            bundle = load_solution_bundle(bundle_path, base_dir=out_dir)
        except ValueError as e:
            raise ConfigError(str(e), details={"path": str(bundle_path)}) from e
        solved = RunConfig.model_validate(bundle.config)
    if solved.model_dump(exclude={"output", "name"}) != config.model_dump(exclude={"output", "name"}):
        logger.warning("cli.fieldgrid_config_differs", bundle_hash=bundle.bundle_hash)

    points = grid.points()
    with timer.phase("layout"):
        layout = prepare_layout(solved, np.concatenate((solved.output.points(), points)))
    with timer.phase("field"):
        evaluation = eval_field(layout, bundle.state, points)
        path = write_csv(field_frame(evaluation), _resolve_path(out_dir, config.output.field_file))

    return CommandResult(
        metrics={
            "points": int(points.shape[0]),
            "exterior_points": int(evaluation.exterior.sum()),
            "masked_points": int((~evaluation.exterior).sum()),
            "bundle_hash": bundle.bundle_hash,
        },
        outputs={"field": str(path)},
        timings=timer.timings,
    )
