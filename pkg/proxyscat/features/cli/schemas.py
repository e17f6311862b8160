"""Pydantic schemas for run manifests and run reports.

Manifests are designed to be:
- Immutable (frozen=True) so a run is fully described by its file
- Closed (extra="forbid") so unknown keys fail before any compute
- Hashable (config_hash) for reports and solution bundles
"""

from __future__ import annotations

import hashlib
from datetime import datetime
from pathlib import Path
from typing import Annotated, Any, Literal

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from proxyscat.core.exceptions import ConfigError
from proxyscat.features.geom.schemas import Point, ShapeSpec

CommandName = Literal["scatmat", "solve", "convergence", "fieldgrid"]


class ManifestBase(BaseModel):
    """Base for every manifest block: frozen and closed."""

    model_config = ConfigDict(frozen=True, extra="forbid")


# =============================================================================
# Medium and incident field
# =============================================================================


class FreeMedium(ManifestBase):
    """Homogeneous free space with wavenumber k."""

    kind: Literal["free"] = "free"
    k: float = Field(..., gt=0.0, description="Wavenumber")


class LayeredMedium(ManifestBase):
    """Two half-spaces meeting at x2 = 0; scatterers live in the upper one.

    Attributes:
        k_plus: Upper wavenumber.
        k_minus: Lower wavenumber.
        delta: Sommerfeld height bound; defaults to the lowest proxy height.
        sommerfeld_tol: Sommerfeld accuracy; defaults to the library setting.
    """

    kind: Literal["layered"] = "layered"
    k_plus: float = Field(..., gt=0.0, description="Upper wavenumber")
    k_minus: float = Field(..., gt=0.0, description="Lower wavenumber")
    delta: float | None = Field(default=None, gt=0.0, description="Sommerfeld height bound")
    sommerfeld_tol: float | None = Field(
        default=None, gt=0.0, lt=1.0, description="Sommerfeld truncation accuracy"
    )


Medium = Annotated[FreeMedium | LayeredMedium, Field(discriminator="kind")]


class PlaneWaveIncident(ManifestBase):
    """Free-space plane wave travelling at angle to the x1 axis."""

    kind: Literal["plane_wave"] = "plane_wave"
    angle: float = Field(default=0.0, description="Direction angle in radians")


class PointSourceIncident(ManifestBase):
    """Free-space point source."""

    kind: Literal["point_source"] = "point_source"
    source: Point


class LayeredPlaneWaveIncident(ManifestBase):
    """Descending plane wave with its reflection and transmission at the interface."""

    kind: Literal["layered_plane_wave"] = "layered_plane_wave"
    theta: float = Field(..., gt=0.0, lt=float(np.pi), description="Incidence angle in (0, pi)")


Incident = Annotated[
    PlaneWaveIncident | PointSourceIncident | LayeredPlaneWaveIncident,
    Field(discriminator="kind"),
]


# =============================================================================
# Geometry
# =============================================================================


class ShapesGeometry(ManifestBase):
    """Explicit list of obstacles."""

    kind: Literal["shapes"] = "shapes"
    shapes: list[ShapeSpec] = Field(..., min_length=1)


class DiskGeometry(ManifestBase):
    """Single sound-soft disk."""

    kind: Literal["disk"] = "disk"
    radius: float = Field(default=1.0, gt=0.0)
    center: Point = (0.0, 0.0)


class TwoEllipseGeometry(ManifestBase):
    """Two stacked ellipses with semi-axes (a/2, 1/2) and vertical gap d.

    The layered variant is selected by the medium, not here.
    """

    kind: Literal["two_ellipse"] = "two_ellipse"
    a: float = Field(..., gt=0.0, description="Ellipse width")
    d: float = Field(..., gt=0.0, description="Vertical gap")
    side_rule: Literal["margin", "printed"] = "margin"


class PhotonicGeometry(ManifestBase):
    """Staggered star-ellipse lattice, optionally cut down to i_count x j_count."""

    kind: Literal["photonic"] = "photonic"
    i_count: int = Field(default=41, ge=1, le=41)
    j_count: int = Field(default=21, ge=1, le=21)
    stagger: Literal["column", "row"] = "column"
    remove_channel: bool = True


class LayeredArrayGeometry(ManifestBase):
    """Two perturbed rows of star ellipses above the interface."""

    kind: Literal["layered_array"] = "layered_array"
    seed: int = Field(default=0, ge=0)
    perturbation: float = Field(default=0.1, ge=0.0)
    spacing_rule: Literal["scaled", "offset"] = "scaled"
    row_counts: tuple[int, int] = (21, 20)


Geometry = Annotated[
    ShapesGeometry | DiskGeometry | TwoEllipseGeometry | PhotonicGeometry | LayeredArrayGeometry,
    Field(discriminator="kind"),
]


class ProxyConfig(ManifestBase):
    """Proxy rectangles around every obstacle.

    Attributes:
        margin: Gap between an obstacle's bounding box and its proxy. When omitted,
            the equidistant margin of the configuration is used.
        panels_horizontal: Panels per horizontal side.
        panels_vertical: Panels per vertical side.
        panel_order: Gauss-Legendre nodes per panel.
        n_p: Node budget; overrides the panel counts when set.
    """

    margin: float | None = Field(default=None, gt=0.0)
    panels_horizontal: int = Field(default=1, ge=1)
    panels_vertical: int = Field(default=1, ge=1)
    panel_order: int = Field(default=16, ge=4, le=32)
    n_p: int | None = Field(default=None, ge=16)


class DiscretizationConfig(ManifestBase):
    """Obstacle boundary discretization."""

    n: int = Field(default=128, ge=16, description="Trapezoidal nodes per obstacle (even)")

    @field_validator("n")
    @classmethod
    def validate_even(cls, v: int) -> int:
        """Kress quadrature needs an even node count."""
        if v % 2:
            raise ValueError(f"n must be even, got {v}")
        return v


class SolverConfig(ManifestBase):
    """GMRES and assembly options."""

    gmres_tol: float = Field(default=1e-9, gt=0.0, lt=1.0)
    max_iter: int = Field(default=500, ge=1)
    restart: int | None = Field(default=None, ge=1)
    transfer_mode: Literal["auto", "matrix_free", "dense_cached"] = "auto"
    method: Literal["composition", "columns"] = "composition"
    dirichlet_check: bool = True


# =============================================================================
# Output, reference and sweep
# =============================================================================


class GridConfig(ManifestBase):
    """Uniform evaluation grid."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float
    nx: int = Field(default=101, ge=1)
    ny: int = Field(default=101, ge=1)

    @model_validator(mode="after")
    def validate_bounds(self) -> GridConfig:
        """Ensure each axis has positive length when sampled more than once."""
        if self.nx > 1 and self.x_max <= self.x_min:
            raise ValueError("x_max must be greater than x_min")
        if self.ny > 1 and self.y_max <= self.y_min:
            raise ValueError("y_max must be greater than y_min")
        return self

    def points(self) -> np.ndarray[Any, np.dtype[np.float64]]:
        """(nx * ny, 2) grid points, x1 varying fastest."""
        x1, x2 = np.meshgrid(
            np.linspace(self.x_min, self.x_max, self.nx),
            np.linspace(self.y_min, self.y_max, self.ny),
        )
        result: np.ndarray[Any, np.dtype[np.float64]] = np.column_stack((x1.ravel(), x2.ravel()))
        return result


class OutputConfig(ManifestBase):
    """Evaluation points and artifact file names inside the output directory."""

    grid: GridConfig | None = None
    probes: list[Point] = Field(default_factory=lambda: [])
    field_file: str = "field.csv"
    report_file: str = "report.json"
    bundle_file: str = "solution.joblib"
    matrix_file: str = "scatmat.pscm"
    convergence_file: str = "convergence.csv"

    def points(self) -> np.ndarray[Any, np.dtype[np.float64]]:
        """Probes followed by grid points."""
        parts = [np.asarray(self.probes, dtype=np.float64).reshape(-1, 2)]
        if self.grid is not None:
            parts.append(self.grid.points())
        return np.concatenate(parts)


class ReferenceConfig(ManifestBase):
    """Reference solution for error estimates.

    Attributes:
        kind: "monolithic" for the direct combined-field solve over all boundaries,
            "refined" for the proxy method with a larger n_p.
        n_p_ref: Node budget of the refined proxies; defaults to twice the run's n_p.
        n_ref: Obstacle nodes for the reference; defaults to the run's n.
    """

    kind: Literal["monolithic", "refined"] = "refined"
    n_p_ref: int | None = Field(default=None, ge=16)
    n_ref: int | None = Field(default=None, ge=16)


class SweepConfig(ManifestBase):
    """Convergence sweep over one physical parameter and a list of n_p.

    Attributes:
        parameter: "k" (wavenumber), "d" (gap) or "a" (aspect ratio).
        values: Parameter values.
        n_p_values: Node budgets tried for every value, ascending.
        tolerance: Accuracy for the required-n_p summary.
        k_times_a: When sweeping a, sets k = k_times_a / a.
    """

    parameter: Literal["k", "d", "a"]
    values: list[float] = Field(..., min_length=1)
    n_p_values: list[int] = Field(..., min_length=1)
    tolerance: float = Field(default=1e-6, gt=0.0)
    k_times_a: float | None = Field(default=None, gt=0.0)

    @field_validator("values")
    @classmethod
    def validate_positive(cls, v: list[float]) -> list[float]:
        """Swept quantities are all positive."""
        if any(x <= 0 for x in v):
            raise ValueError("sweep values must be > 0")
        return v

    @field_validator("n_p_values")
    @classmethod
    def validate_sorted(cls, v: list[int]) -> list[int]:
        """Node budgets must increase."""
        if any(b <= a for a, b in zip(v, v[1:], strict=False)):
            raise ValueError("n_p_values must be strictly increasing")
        return v


# =============================================================================
# Run configuration
# =============================================================================


class RunConfig(ManifestBase):
    """Everything a command needs; one YAML manifest per run."""

    schema_version: str = Field(default="1.0", pattern=r"^\d+\.\d+(\.\d+)?$")
    name: str = Field(default="run", min_length=1, max_length=100)
    medium: Medium
    incident: Incident = Field(default_factory=PlaneWaveIncident)
    geometry: Geometry
    proxy: ProxyConfig = Field(default_factory=ProxyConfig)
    discretization: DiscretizationConfig = Field(default_factory=DiscretizationConfig)
    solver: SolverConfig = Field(default_factory=SolverConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)
    reference: ReferenceConfig | None = None
    sweep: SweepConfig | None = None
    scattering_matrix: str | None = Field(
        default=None, description="Stored matrix reused for equivalent obstacles during solve"
    )

    @model_validator(mode="after")
    def validate_medium_pairing(self) -> RunConfig:
        """Incident fields and geometry generators must match the medium."""
        layered = self.medium.kind == "layered"
        if layered and self.incident.kind != "layered_plane_wave":
            raise ValueError("a layered medium needs a layered_plane_wave incident field")
        if not layered and self.incident.kind == "layered_plane_wave":
            raise ValueError("layered_plane_wave needs a layered medium")
        if self.geometry.kind == "layered_array" and not layered:
            raise ValueError("the layered_array geometry needs a layered medium")
        if self.sweep is not None and self.sweep.parameter in ("a", "d"):
            if self.geometry.kind != "two_ellipse":
                raise ValueError(f"sweeping {self.sweep.parameter} needs the two_ellipse geometry")
        return self

    def config_hash(self) -> str:
        """16-character hex SHA-256 of the manifest JSON."""
        return hashlib.sha256(self.model_dump_json().encode()).hexdigest()[:16]

    @property
    def k(self) -> float:
        """Wavenumber of the medium containing the obstacles."""
        return self.medium.k if isinstance(self.medium, FreeMedium) else self.medium.k_plus

    def with_n_p(self, n_p: int) -> RunConfig:
        """Copy with a different proxy node budget."""
        return self.model_copy(update={"proxy": self.proxy.model_copy(update={"n_p": n_p})})

    def with_sweep_value(self, parameter: Literal["k", "d", "a"], value: float) -> RunConfig:
        """Copy with one physical parameter replaced.

        A layered k sweep sets k_plus and keeps k_minus / k_plus fixed. An a sweep
        also sets k = k_times_a / a when the sweep defines k_times_a.
        """
        config = self
        if parameter in ("a", "d"):
            config = config.model_copy(
                update={"geometry": config.geometry.model_copy(update={parameter: value})}
            )
        k = value if parameter == "k" else None
        if parameter == "a" and self.sweep is not None and self.sweep.k_times_a is not None:
            k = self.sweep.k_times_a / value
        if k is not None:
            if isinstance(config.medium, FreeMedium):
                medium: FreeMedium | LayeredMedium = config.medium.model_copy(update={"k": k})
            else:
                ratio = config.medium.k_minus / config.medium.k_plus
                medium = config.medium.model_copy(update={"k_plus": k, "k_minus": ratio * k})
            config = config.model_copy(update={"medium": medium})
        return config


def load_run_config(path: str | Path) -> RunConfig:
    """Read and validate a YAML manifest.

    Raises:
        ConfigError: If the file is missing, unparsable or not a mapping.
        pydantic.ValidationError: If the mapping violates the schema.
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"Config file not found: {path}", details={"path": str(path)})
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as e:
        raise ConfigError(f"Config file is not valid YAML: {e}", details={"path": str(path)}) from e
    if not isinstance(data, dict):
        raise ConfigError("Config file must contain a mapping", details={"path": str(path)})
    return RunConfig.model_validate(data)


# =============================================================================
# Reports
# =============================================================================


class RunReport(BaseModel):
    """JSON report written by every command, successful or not.

    Attributes:
        command: Command that ran.
        status: "ok" or "error"; the exit code is 0 iff status is "ok".
        run_id: Correlation id also bound to every log event.
        config_hash: Hash of the validated manifest, when it validated.
        config: Echo of the manifest.
        threads: Worker threads used for transfer applications.
        started_at: Start timestamp (UTC).
        duration_ms: Total wall time.
        timings: Wall time per phase in seconds.
        metrics: Command-specific results.
        outputs: Written artifacts by role.
        error: ProxyScatError.to_dict() of the failure.
    """

    command: CommandName
    status: Literal["ok", "error"] = "ok"
    run_id: str
    config_hash: str | None = None
    config: dict[str, Any] | None = None
    threads: int = 1
    started_at: datetime
    duration_ms: float = 0.0
    timings: dict[str, float] = Field(default_factory=lambda: {})
    metrics: dict[str, Any] = Field(default_factory=lambda: {})
    outputs: dict[str, str] = Field(default_factory=lambda: {})
    error: dict[str, Any] | None = None
