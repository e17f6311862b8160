"""Boundary data on all proxies, stored as one flat vector."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from proxyscat.core.exceptions import DimensionError, DomainError

ComplexArray = np.ndarray[Any, np.dtype[np.complex128]]
FloatArray = np.ndarray[Any, np.dtype[np.float64]]


@dataclass(frozen=True, eq=False)
class BoundaryState:
    """Per-proxy blocks [u; du/dn] concatenated in proxy order.

    Attributes:
        data: Complex vector of length sum(2 n_p).
        block_sizes: n_p of each proxy.
        scaled: Whether entries carry the sqrt quadrature weights.
    """

    data: ComplexArray
    block_sizes: tuple[int, ...]
    scaled: bool = False
    offsets: tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        sizes = 2 * np.asarray(self.block_sizes, dtype=int)
        offsets = tuple(int(v) for v in np.concatenate(([0], np.cumsum(sizes))))
        object.__setattr__(self, "offsets", offsets)
        if self.data.ndim != 1 or self.data.shape[0] != offsets[-1]:
            raise DimensionError(
                f"Boundary data shape {self.data.shape} does not match block total {offsets[-1]}",
                details={"block_sizes": list(self.block_sizes)},
            )
        if not np.all(np.isfinite(self.data)):
            raise DomainError("Boundary data contains non-finite entries")

    @classmethod
    def zeros(cls, block_sizes: Sequence[int], scaled: bool = False) -> BoundaryState:
        total = 2 * int(sum(block_sizes))
        return cls(np.zeros(total, dtype=np.complex128), tuple(block_sizes), scaled)

    @classmethod
    def from_blocks(
        cls, blocks: Sequence[tuple[ComplexArray, ComplexArray]], scaled: bool = False
    ) -> BoundaryState:
        """Assemble from (u, du/dn) pairs."""
        data = np.concatenate([np.concatenate((u, dudn)) for u, dudn in blocks])
        data = data.astype(np.complex128)
        return cls(data, tuple(len(u) for u, _ in blocks), scaled)

    @property
    def n_blocks(self) -> int:
        return len(self.block_sizes)

    @property
    def size(self) -> int:
        return self.offsets[-1]

    def block(self, i: int) -> ComplexArray:
        """[u; du/dn] on proxy i."""
        return self.data[self.offsets[i] : self.offsets[i + 1]]

    def values(self, i: int) -> ComplexArray:
        """u on proxy i."""
        return self.block(i)[: self.block_sizes[i]]

    def normal_derivatives(self, i: int) -> ComplexArray:
        """du/dn on proxy i."""
        return self.block(i)[self.block_sizes[i] :]

    def with_data(self, data: ComplexArray) -> BoundaryState:
        """Same layout, new entries."""
        return BoundaryState(np.asarray(data, dtype=np.complex128), self.block_sizes, self.scaled)

    def rescaled(self, sqrt_weights: FloatArray, scaled: bool) -> BoundaryState:
        """Convert between raw and weight-scaled entries.

        Args:
            sqrt_weights: sqrt(w) per entry, length size.
            scaled: Target representation.
        """
        if scaled == self.scaled:
            return self
        factor = sqrt_weights if scaled else 1.0 / sqrt_weights
        return BoundaryState(self.data * factor, self.block_sizes, scaled)
