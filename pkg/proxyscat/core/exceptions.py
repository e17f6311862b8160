"""Exception hierarchy for proxyscat.

Every library error carries a machine-readable code, a process exit code and a
details dict so the CLI can turn it into a JSON error report. Subclasses only
declare their code, exit code and default message.
"""

from typing import Any, ClassVar

from proxyscat.core.logging import get_logger

logger = get_logger(__name__)


class ProxyScatError(Exception):
    """Base exception for proxyscat errors.

    Anything not covered by a subclass is reported as INTERNAL_ERROR with exit code 1.
    """

    code: ClassVar[str] = "INTERNAL_ERROR"
    exit_code: ClassVar[int] = 1
    default_message: ClassVar[str] = "Internal error"

    def __init__(self, message: str | None = None, details: dict[str, Any] | None = None) -> None:
        """Initialize library error.

        Args:
            message: Human-readable error message, the class default when omitted.
            details: Additional error context.
        """
        self.message = message if message is not None else self.default_message
        self.details = details or {}
        super().__init__(self.message)

    @property
    def title(self) -> str:
        """Short summary of the error type."""
        return self.code.replace("_", " ").title()

    def to_dict(self) -> dict[str, Any]:
        """Serialize for run reports."""
        return {
            "code": self.code,
            "title": self.title,
            "message": self.message,
            "exit_code": self.exit_code,
            "details": self.details,
        }


class ConfigError(ProxyScatError):
    """Invalid configuration or parameter (odd node count, δ too small, bad manifest)."""

    code = "CONFIG_ERROR"
    exit_code = 2
    default_message = "Invalid configuration"


class GeometryError(ProxyScatError):
    """Enclosure or disjointness violation between scatterers and proxies."""

    code = "GEOMETRY_ERROR"
    exit_code = 2
    default_message = "Invalid geometry"


class DomainError(ProxyScatError, ValueError):
    """Argument outside the domain of a function (negative x, coincident points, heights)."""

    code = "DOMAIN_ERROR"
    exit_code = 3
    default_message = "Argument outside function domain"


class DimensionError(ProxyScatError):
    code = "DIMENSION_ERROR"
    exit_code = 3
    default_message = "Dimension mismatch"


class ReuseError(ProxyScatError):
    """Scattering matrix reuse requested for a non-equivalent configuration."""

    code = "REUSE_ERROR"
    exit_code = 3
    default_message = "Scattering matrix cannot be reused"


class SingularMatrixError(ProxyScatError):
    """Dense factorization hit a zero pivot."""

    code = "SINGULAR_MATRIX"
    exit_code = 4
    default_message = "Matrix is numerically singular"


class ConvergenceError(ProxyScatError):
    """Iterative solver or quadrature failed to reach its tolerance.

    GMRES failures keep the residual history in details["residual_history"].
    """

    code = "CONVERGENCE_ERROR"
    exit_code = 5
    default_message = "Iterative solver did not converge"


class FormatError(ProxyScatError):
    """Malformed artifact file."""

    code = "FORMAT_ERROR"
    exit_code = 6
    default_message = "Malformed file"


def log_error(exc: ProxyScatError, **context: Any) -> None:
    """Log a handled library error once, at the process boundary.

    Args:
        exc: The error being reported.
        **context: Extra structured fields, such as the config path.
    """
    logger.error(
        "cli.command_failed",
        error_code=exc.code,
        error_message=exc.message,
        details=exc.details,
        **context,
    )
