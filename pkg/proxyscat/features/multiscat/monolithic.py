"""Direct combined-field solve over all obstacle boundaries at once.

Reference solution for convergence studies: one dense system with Kress self
blocks on the diagonal and smooth cross-interaction blocks elsewhere.
"""

from __future__ import annotations

import time
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np

from proxyscat.core.exceptions import DimensionError
from proxyscat.core.logging import get_logger
from proxyscat.features.geom.curves import DiscretizedCurve
from proxyscat.features.linalg.dense import LUFactorization, lu_factor
from proxyscat.features.multiscat.incident import IncidentField
from proxyscat.features.multiscat.state import ComplexArray
from proxyscat.features.potentials.combined import combined_field_matrix, eval_scattered
from proxyscat.features.potentials.kernels import KernelContext, LayerKind, as_context
from proxyscat.features.potentials.layer import layer_matrices

logger = get_logger(__name__)


@dataclass(frozen=True)
class MonolithicSolution:
    """Combined-field densities, one array per obstacle."""

    densities: tuple[ComplexArray, ...]


class MonolithicSolver:
    """Dense combined-field BIE on several sound-soft obstacles.

    The LU factorization is computed once and reused for every incident field.
    """

    def __init__(self, curves: Sequence[DiscretizedCurve], k: float | KernelContext) -> None:
        if not curves:
            raise DimensionError("MonolithicSolver needs at least one curve")
        self.curves = list(curves)
        self.ctx = as_context(k)
        sizes = [c.n for c in self.curves]
        self.offsets = np.concatenate(([0], np.cumsum(sizes))).astype(int)
        start = time.perf_counter()
        self.factorization: LUFactorization = lu_factor(self.matrix())
        logger.info(
            "multiscat.monolithic_factored",
            curves=len(self.curves),
            unknowns=int(self.offsets[-1]),
            condition_estimate=self.factorization.condition_estimate,
            seconds=round(time.perf_counter() - start, 4),
        )

    @property
    def size(self) -> int:
        return int(self.offsets[-1])

    def matrix(self) -> ComplexArray:
        """Full system matrix 1/2 I + D + ik S over all boundaries."""
        ik = 1j * self.ctx.k
        out = np.empty((self.size, self.size), dtype=np.complex128)
        for i, target in enumerate(self.curves):
            rows = slice(self.offsets[i], self.offsets[i + 1])
            for j, source in enumerate(self.curves):
                cols = slice(self.offsets[j], self.offsets[j + 1])
                if i == j:
                    out[rows, cols] = combined_field_matrix(source, self.ctx)
                    continue
                mats = layer_matrices([LayerKind.S, LayerKind.D], source, target, self.ctx)
                out[rows, cols] = mats[LayerKind.D].entries + ik * mats[LayerKind.S].entries
        return out

    def solve(self, incident: IncidentField) -> MonolithicSolution:
        """Densities for the Dirichlet data -u_in on every boundary."""
        u_in = np.concatenate([incident.values(c.nodes) for c in self.curves])
        sigma = self.factorization.solve(-u_in)
        return MonolithicSolution(
            densities=tuple(
                sigma[self.offsets[i] : self.offsets[i + 1]] for i in range(len(self.curves))
            )
        )

    def scattered(self, solution: MonolithicSolution, targets: Any) -> ComplexArray:
        """Scattered field at points off every boundary."""
        pts = np.atleast_2d(np.asarray(targets, dtype=np.float64))
        out = np.zeros(pts.shape[0], dtype=np.complex128)
        for curve, sigma in zip(self.curves, solution.densities, strict=True):
            out += eval_scattered(curve, sigma, pts, self.ctx).values
        return out
