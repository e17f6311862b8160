"""Interface corrections of the two-layer Green's function.

With beta_pm = branch_sqrt(xi, k_pm):

    s_plus(x, y)  = 1/(4 pi) int A(xi) exp(-beta_plus (x2 + y2)) exp(i xi (x1 - y1)) dxi,   x2 >= 0
    s_minus(x, y) = 1/(4 pi) int B(xi) exp(beta_minus x2 - beta_plus y2) exp(i xi (x1 - y1)) dxi, x2 <= 0

A = (k_minus^2 - k_plus^2) / (beta_plus (beta_plus + beta_minus)^2), B = 2 / (beta_plus + beta_minus).
The layered Green's function is g_{k_plus} + s_plus above the interface and
s_minus below; it is continuous with continuous normal derivative across x2 = 0.

Kernel matrices factor as E_x diag(c) E_y^T over the quadrature nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Literal

import numpy as np

from proxyscat.core.exceptions import ConfigError, DomainError
from proxyscat.features.layered.sommerfeld import (
    ComplexArray,
    FloatArray,
    SommerfeldRule,
    branch_sqrt,
)
from proxyscat.features.potentials.kernels import LayerKind

# Rows and columns per block of the factored product.
SPECTRAL_CHUNK = 1024

Side = Literal["upper", "lower"]


@dataclass(frozen=True)
class SommerfeldValue:
    """Correction value with its gradients in the target and source points."""

    value: complex
    grad_x: ComplexArray
    grad_y: ComplexArray


@dataclass(frozen=True, eq=False)
class LayeredContext:
    """Two-layer medium: wavenumbers and the quadrature rule for the corrections.

    Implements the MediumCorrection protocol used by the potentials kernels.
    """

    k_plus: float
    k_minus: float
    rule: SommerfeldRule
    beta_plus: ComplexArray = field(init=False, repr=False)
    beta_minus: ComplexArray = field(init=False, repr=False)
    reflected: ComplexArray = field(init=False, repr=False)
    transmitted: ComplexArray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if min(self.k_plus, self.k_minus) <= 0:
            raise ConfigError(
                "Layer wavenumbers must be > 0",
                details={"k_plus": self.k_plus, "k_minus": self.k_minus},
            )
        xi = self.rule.nodes
        bp = branch_sqrt(xi, self.k_plus)
        bm = branch_sqrt(xi, self.k_minus)
        total = bp + bm
        scale = self.rule.weights / (4.0 * np.pi)
        object.__setattr__(self, "beta_plus", bp)
        object.__setattr__(self, "beta_minus", bm)
        object.__setattr__(
            self, "reflected", scale * (self.k_minus**2 - self.k_plus**2) / (bp * total**2)
        )
        object.__setattr__(self, "transmitted", scale * 2.0 / total)

    @property
    def delta(self) -> float:
        return self.rule.delta

    def medium_key(self) -> str:
        return f"layered:k+={self.k_plus!r}:k-={self.k_minus!r}:rule={self.rule.fingerprint()}"

    def source_factors(self, sources: FloatArray, normals: FloatArray | None = None) -> ComplexArray:
        """E_y[j, l] = exp(-beta_plus y2 - i xi y1), times (-i xi n1 - beta_plus n2) with normals."""
        xi = self.rule.nodes[None, :]
        e = np.exp(-self.beta_plus[None, :] * sources[:, 1, None] - 1j * xi * sources[:, 0, None])
        if normals is not None:
            e = e * (-1j * xi * normals[:, 0, None] - self.beta_plus[None, :] * normals[:, 1, None])
        return e

    def target_factors(
        self, side: Side, targets: FloatArray, normals: FloatArray | None = None
    ) -> ComplexArray:
        """E_x[i, l] = exp(-/+ beta x2 + i xi x1), times the target normal factor with normals."""
        xi = self.rule.nodes[None, :]
        beta = -self.beta_plus if side == "upper" else self.beta_minus
        e = np.exp(beta[None, :] * targets[:, 1, None] + 1j * xi * targets[:, 0, None])
        if normals is not None:
            e = e * (1j * xi * normals[:, 0, None] + beta[None, :] * normals[:, 1, None])
        return e

    def coefficients(self, side: Side) -> ComplexArray:
        return self.reflected if side == "upper" else self.transmitted

    def check_sources(self, sources: FloatArray) -> None:
        """Sources must sit at least delta above the interface.

        Raises:
            DomainError: On the first source below delta.
        """
        low = sources[:, 1] < self.delta * (1.0 - 1e-12)
        if low.any():
            raise DomainError(
                f"Source height below delta={self.delta}",
                details={"min_height": float(sources[:, 1].min()), "delta": self.delta},
            )

    def spectral_matrix(
        self,
        side: Side,
        targets: FloatArray,
        sources: FloatArray,
        target_normals: FloatArray | None = None,
        source_normals: FloatArray | None = None,
    ) -> ComplexArray:
        """s_plus or s_minus (or a normal derivative) between point sets, no weights."""
        self.check_sources(sources)
        if side == "upper" and np.any(targets[:, 1] < 0):
            raise DomainError("s_plus targets must satisfy x2 >= 0")
        if side == "lower" and np.any(targets[:, 1] > 0):
            raise DomainError("s_minus targets must satisfy x2 <= 0")
        coeff = self.coefficients(side)
        out = np.empty((targets.shape[0], sources.shape[0]), dtype=np.complex128)
        for j0 in range(0, sources.shape[0], SPECTRAL_CHUNK):
            j1 = j0 + SPECTRAL_CHUNK
            ey = self.source_factors(
                sources[j0:j1], None if source_normals is None else source_normals[j0:j1]
            )
            for i0 in range(0, targets.shape[0], SPECTRAL_CHUNK):
                i1 = i0 + SPECTRAL_CHUNK
                ex = self.target_factors(
                    side, targets[i0:i1], None if target_normals is None else target_normals[i0:i1]
                )
                out[i0:i1, j0:j1] = (ex * coeff[None, :]) @ ey.T
        return out

    def correction_matrix(
        self,
        kind: LayerKind,
        targets: FloatArray,
        sources: FloatArray,
        target_normals: FloatArray | None = None,
        source_normals: FloatArray | None = None,
    ) -> ComplexArray:
        """Correction kernel: s_plus rows for x2 >= 0, s_minus rows below."""
        kind = LayerKind(kind)
        tn = target_normals if kind.needs_target_normals else None
        sn = source_normals if kind.needs_source_normals else None
        if (kind.needs_target_normals and tn is None) or (kind.needs_source_normals and sn is None):
            raise ConfigError(f"Normals are required for the {kind} correction")
        upper = targets[:, 1] >= 0.0
        out = np.empty((targets.shape[0], sources.shape[0]), dtype=np.complex128)
        for side, rows in (("upper", upper), ("lower", ~upper)):
            if rows.any():
                out[rows] = self.spectral_matrix(
                    side, targets[rows], sources, None if tn is None else tn[rows], sn
                )
        return out

    def _pointwise(self, side: Side, x: Any, y: Any) -> SommerfeldValue:
        xs = np.atleast_2d(np.asarray(x, dtype=np.float64))
        ys = np.atleast_2d(np.asarray(y, dtype=np.float64))
        eye = np.eye(2)
        value = self.spectral_matrix(side, xs, ys)[0, 0]
        grad_x = np.array(
            [self.spectral_matrix(side, xs, ys, target_normals=e[None, :])[0, 0] for e in eye]
        )
        grad_y = np.array(
            [self.spectral_matrix(side, xs, ys, source_normals=e[None, :])[0, 0] for e in eye]
        )
        return SommerfeldValue(value=complex(value), grad_x=grad_x, grad_y=grad_y)

    def s_plus(self, x: Any, y: Any) -> SommerfeldValue:
        """Upper correction and gradients; x2 >= 0, y2 >= delta.

        Raises:
            DomainError: On height violations.
        """
        return self._pointwise("upper", x, y)

    def s_minus(self, x: Any, y: Any) -> SommerfeldValue:
        """Transmitted kernel and gradients; x2 <= 0, y2 >= delta.

        Raises:
            DomainError: On height violations.
        """
        return self._pointwise("lower", x, y)
