"""Quadrature rule on the real line for Sommerfeld integrals.

The integrands of the interface corrections have square-root branch points at
xi = +-k_plus and +-k_minus and decay like exp(-|xi| delta) once the source sits
at height >= delta. The rule truncates at +-xi_max, grades panels dyadically
toward every branch point and removes the square-root singularity on the
innermost panel with xi = s + w v^2.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Any

import numpy as np

from proxyscat.core.exceptions import ConfigError
from proxyscat.core.logging import get_logger

logger = get_logger(__name__)

FloatArray = np.ndarray[Any, np.dtype[np.float64]]
ComplexArray = np.ndarray[Any, np.dtype[np.complex128]]

# 2 pi delta max(k) must exceed this for the truncated integral to be affordable.
MIN_DECAY_WAVELENGTHS = 0.1


def branch_sqrt(xi: FloatArray, k: float) -> ComplexArray:
    """beta(xi) = sqrt(xi^2 - k^2), >= 0 for |xi| >= k and -i sqrt(k^2 - xi^2) inside."""
    xi = np.asarray(xi, dtype=np.float64)
    d = (np.abs(xi) - k) * (np.abs(xi) + k)
    root = np.sqrt(np.abs(d))
    beta: ComplexArray = np.where(d >= 0, root + 0j, -1j * root)
    return beta


@dataclass(frozen=True, eq=False)
class SommerfeldRule:
    """Symmetric nodes and positive weights on [-xi_max, xi_max].

    Attributes:
        nodes: Sorted quadrature nodes.
        weights: Positive weights.
        xi_max: Truncation point.
        delta: Minimum source height the rule was built for.
        tol: Requested accuracy.
        panels: (start, end) of every panel on the positive half-line.
    """

    nodes: FloatArray
    weights: FloatArray
    xi_max: float
    delta: float
    tol: float
    panels: tuple[tuple[float, float], ...]

    @property
    def size(self) -> int:
        return int(self.nodes.size)

    def fingerprint(self) -> str:
        """Hash of nodes and weights."""
        digest = hashlib.sha256(self.nodes.tobytes() + self.weights.tobytes())
        return digest.hexdigest()[:16]

    def integrate(self, values: Any) -> Any:
        """Sum of weights times values along the last axis."""
        return np.asarray(values) @ self.weights


def _gl_panel(a: float, b: float, ref_x: FloatArray, ref_w: FloatArray) -> tuple[FloatArray, FloatArray]:
    half = 0.5 * (b - a)
    return 0.5 * (a + b) + half * ref_x, abs(half) * ref_w


def _sqrt_panel(
    s: float, end: float, ref_x: FloatArray, ref_w: FloatArray
) -> tuple[FloatArray, FloatArray]:
    """Panel [s, end] with a square-root singularity at s: xi = s + (end - s) v^2."""
    v = 0.5 * (ref_x + 1.0)
    width = end - s
    return s + width * v**2, 2.0 * abs(width) * v * 0.5 * ref_w


def _uniform(a: float, b: float, h_max: float) -> list[tuple[float, float]]:
    count = max(1, int(np.ceil(abs(b - a) / h_max)))
    edges = np.linspace(a, b, count + 1)
    return [
        (float(min(lo, hi)), float(max(lo, hi))) for lo, hi in zip(edges[:-1], edges[1:], strict=True)
    ]


def _graded(
    singular: float, other: float, min_width: float, h_max: float
) -> tuple[tuple[float, float], list[tuple[float, float]]]:
    """Dyadic panels from other toward singular; returns (innermost, regular panels)."""
    length = other - singular
    regular: list[tuple[float, float]] = []
    scale = 1.0
    while abs(length) * scale > min_width:
        outer, inner = singular + length * scale, singular + 0.5 * length * scale
        regular.extend(_uniform(inner, outer, h_max))
        scale *= 0.5
    return (singular, singular + length * scale), regular


def build_sommerfeld_rule(
    k_plus: float,
    k_minus: float,
    delta: float,
    horizontal_extent: float,
    tol: float = 1e-10,
    vertical_extent: float | None = None,
    panel_order: int = 16,
    panel_scale: float = 1.0,
    xi_max: float | None = None,
) -> SommerfeldRule:
    """Build the truncated, graded rule.

    Args:
        k_plus: Wavenumber above the interface.
        k_minus: Wavenumber below the interface.
        delta: Minimum source height.
        horizontal_extent: Half of the largest horizontal source-target separation.
        tol: Target accuracy; fixes xi_max = max(k) + ln(1/tol)/delta and the grading depth.
        vertical_extent: Largest height of sources and targets, defaults to horizontal_extent.
        panel_order: Gauss-Legendre nodes per panel.
        panel_scale: Multiplies the largest panel width.
        xi_max: Truncation point, at least the default.

    Raises:
        ConfigError: On non-positive parameters, 2 pi delta max(k) <= 0.1, or a
            truncation point below the default.
    """
    if min(k_plus, k_minus, delta, tol, panel_scale) <= 0 or horizontal_extent < 0:
        raise ConfigError(
            "Sommerfeld rule parameters must be positive",
            details={"k_plus": k_plus, "k_minus": k_minus, "delta": delta, "tol": tol},
        )
    k_max, k_min = max(k_plus, k_minus), min(k_plus, k_minus)
    if 2.0 * np.pi * delta * k_max <= MIN_DECAY_WAVELENGTHS:
        raise ConfigError(
            f"delta={delta} is too small: need 2*pi*delta*max(k) > {MIN_DECAY_WAVELENGTHS}",
            details={"delta": delta, "k_max": k_max},
        )
    truncation = k_max + np.log(1.0 / tol) / delta
    if xi_max is None:
        xi_max = truncation
    elif xi_max < truncation:
        raise ConfigError(
            f"xi_max={xi_max} is below the truncation point {truncation:.6g} for tol={tol}",
            details={"xi_max": xi_max, "required": truncation},
        )

    height = vertical_extent if vertical_extent is not None else horizontal_extent
    span = max(2.0 * horizontal_extent, 2.0 * height, 1e-300)
    h_max = panel_scale * min(20.0 / span, k_min / 2.0)
    min_width = tol * k_min

    branch = sorted({k_plus, k_minus})
    breaks = [0.0, *branch, xi_max]
    ref_x, ref_w = np.polynomial.legendre.leggauss(panel_order)

    regular: list[tuple[float, float]] = []
    singular: list[tuple[float, float]] = []
    for a, b in zip(breaks[:-1], breaks[1:], strict=True):
        left, right = a in branch, b in branch
        if left and right:
            mid = 0.5 * (a + b)
            for s, o in ((a, mid), (b, mid)):
                inner, panels = _graded(s, o, min_width, h_max)
                singular.append(inner)
                regular.extend(panels)
        elif left or right:
            s, o = (a, b) if left else (b, a)
            inner, panels = _graded(s, o, min_width, h_max)
            singular.append(inner)
            regular.extend(panels)
        else:
            regular.extend(_uniform(a, b, h_max))

    nodes, weights = [], []
    for a, b in regular:
        x, w = _gl_panel(a, b, ref_x, ref_w)
        nodes.append(x)
        weights.append(w)
    for s, end in singular:
        x, w = _sqrt_panel(s, end, ref_x, ref_w)
        nodes.append(x)
        weights.append(w)
    positive = np.concatenate(nodes)
    positive_w = np.concatenate(weights)
    order = np.argsort(positive)
    positive, positive_w = positive[order], positive_w[order]

    all_nodes = np.concatenate((-positive[::-1], positive))
    all_weights = np.concatenate((positive_w[::-1], positive_w))
    panels = tuple(sorted(regular + [(min(s, e), max(s, e)) for s, e in singular]))

    logger.debug(
        "layered.sommerfeld_rule_built",
        nodes=int(all_nodes.size),
        xi_max=float(xi_max),
        h_max=float(h_max),
        delta=delta,
    )
    return SommerfeldRule(
        nodes=all_nodes,
        weights=all_weights,
        xi_max=float(xi_max),
        delta=float(delta),
        tol=float(tol),
        panels=panels,
    )
