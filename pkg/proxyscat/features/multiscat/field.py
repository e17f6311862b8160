"""Field evaluation from the solved proxy data.

Outside every proxy the scattered field is

    u_sc(x) = sum_j (D_{P_j}[u_j] - S_{P_j}[du_j/dn])(x),

with (u_j, du_j/dn) the net scattered data on P_j. Inside a proxy the same sum
vanishes identically, so grid points there are masked instead of evaluated.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Any

import numpy as np

from proxyscat.core.exceptions import DimensionError
from proxyscat.core.logging import get_logger
from proxyscat.features.multiscat.state import BoundaryState, ComplexArray
from proxyscat.features.multiscat.system import (
    MultiParticleSolution,
    MultiParticleSystem,
    ParticleLayout,
)
from proxyscat.features.potentials.combined import (
    combined_field_matrix,
    eval_scattered,
    solve_combined_field,
)
from proxyscat.features.potentials.kernels import LayerKind
from proxyscat.features.potentials.layer import potential_at

logger = get_logger(__name__)


class PointMask(IntEnum):
    """Classification of an evaluation point."""

    EXTERIOR = 0
    INSIDE_PROXY = 1
    INSIDE_SCATTERER = 2


@dataclass(frozen=True)
class FieldEvaluation:
    """Fields on a set of points; masked entries are NaN.

    Attributes:
        points: (m, 2) evaluation points.
        scattered: u_sc.
        total: u_sc + u_in.
        mask: PointMask value per point.
    """

    points: np.ndarray[Any, np.dtype[np.float64]]
    scattered: ComplexArray
    total: ComplexArray
    mask: np.ndarray[Any, np.dtype[np.int8]]

    @property
    def exterior(self) -> np.ndarray[Any, np.dtype[np.bool_]]:
        result: np.ndarray[Any, np.dtype[np.bool_]] = self.mask == PointMask.EXTERIOR
        return result


def _layout(system: MultiParticleSystem | ParticleLayout) -> ParticleLayout:
    return system.layout if isinstance(system, MultiParticleSystem) else system


def _raw_state(
    layout: ParticleLayout, solution: MultiParticleSolution | BoundaryState
) -> BoundaryState:
    state = solution.state if isinstance(solution, MultiParticleSolution) else solution
    return layout.raw(state)


def _points(targets: Any) -> np.ndarray[Any, np.dtype[np.float64]]:
    pts = np.atleast_2d(np.asarray(targets, dtype=np.float64))
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise DimensionError(f"Targets must have shape (m, 2), got {pts.shape}")
    return pts


def point_mask(
    system: MultiParticleSystem | ParticleLayout, targets: Any
) -> np.ndarray[Any, np.dtype[np.int8]]:
    """0 outside every proxy, 1 inside a proxy, 2 inside a scatterer."""
    layout = _layout(system)
    pts = _points(targets)
    mask = np.zeros(pts.shape[0], dtype=np.int8)
    for proxy in layout.proxy_specs:
        mask[proxy.contains(pts)] = PointMask.INSIDE_PROXY
    for shape in layout.shapes:
        mask[shape.contains(pts)] = PointMask.INSIDE_SCATTERER
    return mask


def _proxy_potential(
    layout: ParticleLayout, state: BoundaryState, j: int, pts: Any
) -> ComplexArray:
    terms: dict[LayerKind | str, ComplexArray] = {
        LayerKind.D: state.values(j),
        LayerKind.S: -state.normal_derivatives(j),
    }
    return potential_at(terms, layout.proxies[j], pts, layout.ctx)


def representation(
    system: MultiParticleSystem | ParticleLayout,
    solution: MultiParticleSolution | BoundaryState,
    points: Any,
) -> ComplexArray:
    """Unmasked proxy representation summed over all proxies.

    Equals u_sc outside the proxies and vanishes inside them.
    """
    layout = _layout(system)
    state = _raw_state(layout, solution)
    pts = _points(points)
    out = np.zeros(pts.shape[0], dtype=np.complex128)
    for j in range(layout.n_particles):
        out += _proxy_potential(layout, state, j, pts)
    return out


def self_representation(
    system: MultiParticleSystem | ParticleLayout,
    solution: MultiParticleSolution | BoundaryState,
    i: int,
    points: Any,
) -> ComplexArray:
    """D_{P_i}[u_i] - S_{P_i}[du_i/dn] at arbitrary points (no masking)."""
    layout = _layout(system)
    state = _raw_state(layout, solution)
    return _proxy_potential(layout, state, i, _points(points))


def eval_field(
    system: MultiParticleSystem | ParticleLayout,
    solution: MultiParticleSolution | BoundaryState,
    targets: Any,
) -> FieldEvaluation:
    """Scattered and total field with points inside proxies masked."""
    layout = _layout(system)
    pts = _points(targets)
    mask = point_mask(layout, pts)
    exterior = mask == PointMask.EXTERIOR

    scattered = np.full(pts.shape[0], np.nan + 1j * np.nan, dtype=np.complex128)
    total = scattered.copy()
    if exterior.any():
        outside = pts[exterior]
        u_sc = representation(layout, solution, outside)
        scattered[exterior] = u_sc
        total[exterior] = u_sc + layout.incident.values(outside)
    logger.debug(
        "multiscat.field_evaluated",
        points=int(pts.shape[0]),
        exterior=int(exterior.sum()),
        masked=int((~exterior).sum()),
    )
    return FieldEvaluation(points=pts, scattered=scattered, total=total, mask=mask)


def boundary_densities(
    system: MultiParticleSystem, solution: MultiParticleSolution | BoundaryState
) -> list[ComplexArray]:
    """Combined-field density on every obstacle boundary.

    sigma_i solves the single-obstacle problem for the incoming field whose proxy
    data are b_i + (T x)_i, which is the composition K^{-1} R inside A_i.
    """
    layout = system.layout
    state = _raw_state(layout, solution)
    incoming = system.incoming.with_data(system.incoming.data + system.transfer.apply(state).data)
    densities: list[ComplexArray] = []
    for i, curve in enumerate(layout.scatterers):
        # D - S of interior-regular data is the negated field inside the proxy
        u_incoming = -_proxy_potential(layout, incoming, i, curve.nodes)
        densities.append(solve_combined_field(curve, layout.ctx, u_incoming))
    return densities


def dirichlet_residual(
    system: MultiParticleSystem, solution: MultiParticleSolution | BoundaryState
) -> float:
    """max |u_tot| on all obstacle boundaries relative to max |u_in| there.

    On Gamma_i the total field is the incident field, plus the fields radiated by
    the densities of all other obstacles, plus the exterior trace of the
    obstacle's own density. Densities come from boundary_densities, so a state
    that misses part of the multiple scattering leaves that part on Gamma_i.
    """
    layout = system.layout
    densities = boundary_densities(system, solution)

    worst = 0.0
    scale = 0.0
    for i, curve in enumerate(layout.scatterers):
        u_in = layout.incident.values(curve.nodes)
        total = u_in + combined_field_matrix(curve, layout.ctx) @ densities[i]
        for j, other in enumerate(layout.scatterers):
            if j != i:
                total += eval_scattered(other, densities[j], curve.nodes, layout.ctx).values
        worst = max(worst, float(np.abs(total).max()))
        scale = max(scale, float(np.abs(u_in).max()))
    residual = worst / scale if scale > 0.0 else worst
    logger.info("multiscat.dirichlet_residual", residual=residual)
    return residual
