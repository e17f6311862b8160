"""Proxy-to-proxy transfer of outgoing data.

T_ij maps the outgoing data (u_j, du_j/dn) of proxy j to the data its exterior
Green representation induces on proxy i:

    T_ij = [[D, -S], [D', -S']]_{P_j -> P_i},   T_ii = 0.
"""

from __future__ import annotations

import threading
import time
from collections.abc import Sequence
from typing import Literal

import numpy as np
from joblib import Parallel, delayed  # type: ignore[import-untyped]

from proxyscat.core.config import get_settings
from proxyscat.core.exceptions import DimensionError
from proxyscat.core.logging import get_logger
from proxyscat.features.geom.curves import DiscretizedCurve
from proxyscat.features.geom.lattices import check_proxies_disjoint
from proxyscat.features.layered.far import sommerfeld_far_apply
from proxyscat.features.layered.kernels import LayeredContext
from proxyscat.features.multiscat.state import BoundaryState, ComplexArray
from proxyscat.features.potentials.kernels import (
    KernelContext,
    LayerKind,
    as_context,
    free_kernel_set,
)
from proxyscat.features.potentials.layer import layer_matrices

logger = get_logger(__name__)

TransferMode = Literal["auto", "matrix_free", "dense_cached"]
_KINDS = [LayerKind.S, LayerKind.D, LayerKind.SP, LayerKind.DP]
# Digits kept when keying blocks by relative position.
_OFFSET_DIGITS = 12


def _assemble(mats: dict[LayerKind, ComplexArray]) -> ComplexArray:
    return np.block(
        [
            [mats[LayerKind.D], -mats[LayerKind.S]],
            [mats[LayerKind.DP], -mats[LayerKind.SP]],
        ]
    )


class TransferOperator:
    """Off-diagonal proxy interactions, applied densely or matrix-free.

    "dense_cached" stores each block once per relative placement and reuses it
    for translated pairs; "matrix_free" recomputes kernels on every apply and,
    in a layered medium, sums the interface correction spectrally over all proxies.
    "auto" picks dense_cached up to settings.transfer_dense_max_proxies proxies.

    Raises:
        GeometryError: If two proxies intersect.
    """

    def __init__(
        self,
        proxies: Sequence[DiscretizedCurve],
        k: float | KernelContext,
        mode: TransferMode = "auto",
        threads: int | None = None,
    ) -> None:
        settings = get_settings()
        check_proxies_disjoint(proxies)
        self.proxies = list(proxies)
        self.ctx = as_context(k)
        if mode == "auto":
            mode = "dense_cached" if len(self.proxies) <= settings.transfer_dense_max_proxies else "matrix_free"
        self.mode: TransferMode = mode
        self.threads = threads if threads is not None else settings.threads
        self._blocks: dict[tuple[object, ...], ComplexArray] = {}
        self._lock = threading.Lock()
        self.applications = 0

    @property
    def block_sizes(self) -> tuple[int, ...]:
        return tuple(p.n for p in self.proxies)

    @property
    def cached_blocks(self) -> int:
        return len(self._blocks)

    def _block_key(self, i: int, j: int) -> tuple[object, ...]:
        pi, pj = self.proxies[i], self.proxies[j]
        dx = round(pi.center[0] - pj.center[0], _OFFSET_DIGITS)
        dy = round(pi.center[1] - pj.center[1], _OFFSET_DIGITS)
        if self.ctx.is_layered:
            return (pi.fingerprint, pj.fingerprint, dx, pi.center[1], pj.center[1])
        return (pi.fingerprint, pj.fingerprint, dx, dy)

    def block(self, i: int, j: int) -> ComplexArray:
        """T_ij on raw (unscaled) data."""
        pi, pj = self.proxies[i], self.proxies[j]
        if i == j:
            return np.zeros((2 * pi.n, 2 * pj.n), dtype=np.complex128)
        key = self._block_key(i, j)
        cached = self._blocks.get(key)
        if cached is not None:
            return cached
        mats = layer_matrices(list(_KINDS), pj, pi, self.ctx)
        block = _assemble({kind: m.entries for kind, m in mats.items()})
        if self.mode == "dense_cached":
            with self._lock:
                self._blocks.setdefault(key, block)
        return block

    def dense(self) -> ComplexArray:
        """Full T as one matrix (small systems and tests)."""
        m = len(self.proxies)
        return np.block([[self.block(i, j) for j in range(m)] for i in range(m)])

    def _target_block(self, i: int, x: BoundaryState) -> ComplexArray:
        """Contribution of every other proxy to proxy i.

        In matrix-free layered mode only the free-space part is formed here.
        """
        pi = self.proxies[i]
        out = np.zeros(2 * pi.n, dtype=np.complex128)
        for j, pj in enumerate(self.proxies):
            if j == i:
                continue
            if self.mode == "dense_cached":
                out += self.block(i, j) @ x.block(j)
                continue
            mats = free_kernel_set(self.ctx.k, pi.nodes, pj.nodes, _KINDS, pi.normals, pj.normals)
            mu = pj.weights * x.values(j)
            rho = pj.weights * x.normal_derivatives(j)
            out[: pi.n] += mats[LayerKind.D] @ mu - mats[LayerKind.S] @ rho
            out[pi.n :] += mats[LayerKind.DP] @ mu - mats[LayerKind.SP] @ rho
        return out

    def _layered_correction(self, x: BoundaryState) -> list[ComplexArray]:
        layered = self.ctx.layered
        if not isinstance(layered, LayeredContext):
            raise TypeError("Matrix-free layered transfer needs a LayeredContext")
        nodes = np.concatenate([p.nodes for p in self.proxies])
        normals = np.concatenate([p.normals for p in self.proxies])
        weights = np.concatenate([p.weights for p in self.proxies])
        mu = np.concatenate([x.values(i) for i in range(x.n_blocks)])
        rho = np.concatenate([x.normal_derivatives(i) for i in range(x.n_blocks)])
        total = sommerfeld_far_apply(layered, nodes, normals, weights, mu, rho, nodes, normals)

        out = []
        start = 0
        for i, p in enumerate(self.proxies):
            stop = start + p.n
            own = sommerfeld_far_apply(
                layered, p.nodes, p.normals, p.weights, x.values(i), x.normal_derivatives(i), p.nodes, p.normals
            )
            values = total.values[start:stop] - own.values
            derivs = total.normal_derivatives[start:stop] - own.normal_derivatives  # type: ignore[index,operator]
            out.append(np.concatenate((values, derivs)))
            start = stop
        return out

    def apply(self, x: BoundaryState) -> BoundaryState:
        """y_i = sum_{j != i} T_ij x_j on raw data.

        Raises:
            DimensionError: If the state layout differs from the proxies.
        """
        if x.block_sizes != self.block_sizes:
            raise DimensionError(
                "Boundary state layout does not match the proxies",
                details={"state": list(x.block_sizes), "proxies": list(self.block_sizes)},
            )
        if x.scaled:
            raise DimensionError("TransferOperator.apply expects raw (unscaled) data")
        start = time.perf_counter()
        m = len(self.proxies)
        if m == 1:
            return BoundaryState.zeros(self.block_sizes)

        if self.threads > 1:
            blocks = Parallel(n_jobs=self.threads, prefer="threads")(
                delayed(self._target_block)(i, x) for i in range(m)
            )
        else:
            blocks = [self._target_block(i, x) for i in range(m)]
        if self.mode == "matrix_free" and self.ctx.layered is not None:
            for block, correction in zip(blocks, self._layered_correction(x), strict=True):
                block += correction

        self.applications += 1
        logger.debug(
            "multiscat.transfer_applied",
            mode=self.mode,
            proxies=m,
            seconds=round(time.perf_counter() - start, 4),
        )
        return BoundaryState(np.concatenate(blocks), self.block_sizes)
