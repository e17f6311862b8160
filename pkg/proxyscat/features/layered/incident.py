"""Plane wave incident on the two-layer medium from above.

Above the interface the field is the descending wave plus its reflection,
below it is the transmitted wave:

    u = e^{i alpha x1} (e^{-i gamma x2} + r e^{i gamma x2}),   x2 >= 0
    u = (1 + r) e^{i alpha x1} e^{-i gamma_minus x2},          x2 < 0

alpha = k_plus cos(theta), gamma = k_plus sin(theta), gamma_minus = sqrt(k_minus^2 - alpha^2)
with Im(gamma_minus) >= 0 and r = (gamma - gamma_minus) / (gamma + gamma_minus).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from proxyscat.core.exceptions import ConfigError
from proxyscat.features.layered.sommerfeld import ComplexArray


@dataclass(frozen=True)
class LayeredPlaneWave:
    """Incident field satisfying the transmission conditions at x2 = 0.

    Attributes:
        theta: Angle in (0, pi) between the interface and the descending direction.
        k_plus: Upper wavenumber.
        k_minus: Lower wavenumber.
    """

    theta: float
    k_plus: float
    k_minus: float

    def __post_init__(self) -> None:
        if not 0.0 < self.theta < np.pi:
            raise ConfigError(f"Incidence angle must lie in (0, pi), got {self.theta}")
        if min(self.k_plus, self.k_minus) <= 0:
            raise ConfigError("Layer wavenumbers must be > 0")

    @property
    def alpha(self) -> float:
        return float(self.k_plus * np.cos(self.theta))

    @property
    def gamma(self) -> float:
        return float(self.k_plus * np.sin(self.theta))

    @property
    def gamma_minus(self) -> complex:
        return complex(np.sqrt(complex(self.k_minus**2 - self.alpha**2)))

    @property
    def reflection(self) -> complex:
        g, gm = self.gamma, self.gamma_minus
        return (g - gm) / (g + gm)

    def _split(self, points: Any) -> tuple[Any, Any, Any, Any]:
        p = np.atleast_2d(np.asarray(points, dtype=np.float64))
        upper = p[:, 1] >= 0.0
        return p[:, 0], p[:, 1], upper, np.exp(1j * self.alpha * p[:, 0])

    def values(self, points: Any) -> ComplexArray:
        """Field at (m, 2) points."""
        _, x2, upper, phase = self._split(points)
        g, gm, r = self.gamma, self.gamma_minus, self.reflection
        above = np.exp(-1j * g * x2) + r * np.exp(1j * g * x2)
        below = (1.0 + r) * np.exp(-1j * gm * x2)
        result: ComplexArray = phase * np.where(upper, above, below)
        return result

    def gradients(self, points: Any) -> ComplexArray:
        """(m, 2) gradient of the field."""
        _, x2, upper, phase = self._split(points)
        g, gm, r = self.gamma, self.gamma_minus, self.reflection
        u = self.values(points)
        d_above = phase * (-1j * g * np.exp(-1j * g * x2) + 1j * g * r * np.exp(1j * g * x2))
        d_below = -1j * gm * u
        result: ComplexArray = np.column_stack((1j * self.alpha * u, np.where(upper, d_above, d_below)))
        return result


def layered_incident(theta: float, k_plus: float, k_minus: float) -> LayeredPlaneWave:
    """LayeredPlaneWave after validating the angle and wavenumbers."""
    return LayeredPlaneWave(theta=theta, k_plus=k_plus, k_minus=k_minus)
