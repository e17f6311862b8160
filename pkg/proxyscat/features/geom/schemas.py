"""Pydantic schemas for scatterer shapes and rectangular proxy surfaces.

Shape and proxy specs are designed to be:
- Immutable (frozen=True) so discretizations can be cached by content
- Closed (extra="forbid") so manifest typos fail before any compute
- Hashable by content (config_hash) for scattering-matrix provenance
"""

from __future__ import annotations

import hashlib
from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

Point = tuple[float, float]


class GeometrySpecBase(BaseModel):
    """Base for geometry specs: frozen, closed, content-hashable."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    center: Point = Field(default=(0.0, 0.0), description="Center point (c1, c2)")

    def config_hash(self) -> str:
        """16-character hex SHA-256 of the spec JSON."""
        return hashlib.sha256(self.model_dump_json().encode()).hexdigest()[:16]

    def relative_signature(self) -> str:
        """Spec JSON without the center: equal for rigid translates."""
        return self.model_dump_json(exclude={"center"})


class ShapeSpec(GeometrySpecBase):
    """Ellipse or star-shaped ellipse.

    x(t) = c + r(t) (a cos t, b sin t), r(t) = 1 + star_amplitude cos(star_frequency t),
    with r = 1 for plain ellipses.

    Attributes:
        kind: "ellipse" or "star_ellipse".
        a: Horizontal semi-axis scale.
        b: Vertical semi-axis scale.
        star_amplitude: Radial modulation amplitude, |amplitude| < 1.
        star_frequency: Number of lobes.
    """

    kind: Literal["ellipse", "star_ellipse"] = "ellipse"
    a: float = Field(..., gt=0.0, description="Horizontal semi-axis scale")
    b: float = Field(..., gt=0.0, description="Vertical semi-axis scale")
    star_amplitude: float = Field(default=0.1, description="Radial modulation amplitude")
    star_frequency: int = Field(default=7, ge=0, le=256, description="Radial modulation frequency")

    @field_validator("star_amplitude")
    @classmethod
    def validate_amplitude(cls, v: float) -> float:
        """Keep r(t) strictly positive.

        Raises:
            ValueError: If |v| >= 1.
        """
        if abs(v) >= 1.0:
            raise ValueError(f"star_amplitude must satisfy |amplitude| < 1, got {v}")
        return v

    @property
    def amplitude(self) -> float:
        """Effective modulation amplitude (0 for plain ellipses)."""
        return self.star_amplitude if self.kind == "star_ellipse" else 0.0

    def translated(self, shift: Point) -> ShapeSpec:
        """Copy moved by shift."""
        return self.model_copy(update={"center": (self.center[0] + shift[0], self.center[1] + shift[1])})

    def radius(self, t: np.ndarray[Any, Any]) -> np.ndarray[Any, Any]:
        """Radial modulation r(t)."""
        return 1.0 + self.amplitude * np.cos(self.star_frequency * t)

    def contains(self, points: np.ndarray[Any, Any]) -> np.ndarray[Any, np.dtype[np.bool_]]:
        """Strict interior test.

        In coordinates scaled by (1/a, 1/b) the curve is the polar graph rho = r(t),
        so a point is inside when its scaled radius is below r at its scaled angle.
        """
        p = np.atleast_2d(np.asarray(points, dtype=np.float64))
        q1 = (p[:, 0] - self.center[0]) / self.a
        q2 = (p[:, 1] - self.center[1]) / self.b
        rho = np.hypot(q1, q2)
        result: np.ndarray[Any, np.dtype[np.bool_]] = rho < self.radius(np.arctan2(q2, q1))
        return result


class RectProxySpec(GeometrySpecBase):
    """Axis-aligned rectangular proxy surface discretized by Gauss-Legendre panels.

    n_p = 2 * panel_order * (panels_horizontal + panels_vertical).
    """

    width: float = Field(..., gt=0.0, description="Horizontal side length")
    height: float = Field(..., gt=0.0, description="Vertical side length")
    panels_horizontal: int = Field(default=1, ge=1, le=4096, description="Panels per horizontal side")
    panels_vertical: int = Field(default=1, ge=1, le=4096, description="Panels per vertical side")
    panel_order: int = Field(default=16, ge=4, le=32, description="Gauss-Legendre nodes per panel")

    @property
    def n_p(self) -> int:
        """Total proxy node count."""
        return 2 * self.panel_order * (self.panels_horizontal + self.panels_vertical)

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        """(x_min, x_max, y_min, y_max)."""
        cx, cy = self.center
        return (cx - self.width / 2, cx + self.width / 2, cy - self.height / 2, cy + self.height / 2)

    def translated(self, shift: Point) -> RectProxySpec:
        """Copy moved by shift."""
        return self.model_copy(update={"center": (self.center[0] + shift[0], self.center[1] + shift[1])})

    def refined(self, factor: int) -> RectProxySpec:
        """Same rectangle with panel counts multiplied by factor."""
        return self.model_copy(
            update={
                "panels_horizontal": self.panels_horizontal * factor,
                "panels_vertical": self.panels_vertical * factor,
            }
        )

    def contains(self, points: np.ndarray[Any, Any]) -> np.ndarray[Any, np.dtype[np.bool_]]:
        """Strict interior test."""
        p = np.atleast_2d(np.asarray(points, dtype=np.float64))
        x0, x1, y0, y1 = self.bounds
        result: np.ndarray[Any, np.dtype[np.bool_]] = (
            (p[:, 0] > x0) & (p[:, 0] < x1) & (p[:, 1] > y0) & (p[:, 1] < y1)
        )
        return result
