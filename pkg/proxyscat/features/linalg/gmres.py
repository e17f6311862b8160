"""Matrix-free GMRES.

Arnoldi with modified Gram-Schmidt plus one reorthogonalization pass, and a
complex Givens-rotation update of the least-squares problem. The basis is kept
in full unless a restart length is given.

CRITICAL: Residuals are relative to ||b|| and are the recursive (Givens)
estimates; callers that need the true residual recompute it.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import scipy.linalg  # type: ignore[import-untyped]
import structlog
from scipy.sparse.linalg import LinearOperator, aslinearoperator  # type: ignore[import-untyped]

from proxyscat.core.exceptions import ConvergenceError, DimensionError

logger = structlog.get_logger()

ComplexArray = np.ndarray[Any, np.dtype[np.complexfloating[Any, Any]]]

# Arnoldi breakdown threshold relative to ||A v||
BREAKDOWN_TOL = 1e-14


@dataclass
class GMRESResult:
    """Outcome of a GMRES solve.

    Attributes:
        x: Approximate solution.
        converged: Whether the relative residual reached tol.
        iterations: Total Arnoldi steps over all cycles.
        residual_history: Relative residual, starting with the initial one.
        restarts: Number of completed restart cycles.
    """

    x: ComplexArray
    converged: bool
    iterations: int
    residual_history: list[float] = field(default_factory=lambda: [])
    restarts: int = 0

    @property
    def final_residual(self) -> float:
        """Last recorded relative residual."""
        return self.residual_history[-1] if self.residual_history else 0.0


def _givens(a: complex, b: complex) -> tuple[float, complex]:
    """Rotation (c, s) zeroing b in the pair (a, b)."""
    if b == 0:
        return 1.0, 0j
    if a == 0:
        return 0.0, 1.0 + 0j
    denom = float(np.hypot(abs(a), abs(b)))
    c = abs(a) / denom
    s = (a / abs(a)) * np.conj(b) / denom
    return c, complex(s)


def _as_operator(op: LinearOperator | np.ndarray[Any, Any] | Callable[..., Any], n: int) -> LinearOperator:
    if callable(op) and not isinstance(op, LinearOperator):
        return LinearOperator((n, n), matvec=op, dtype=np.complex128)
    return aslinearoperator(op)


def gmres(
    op: LinearOperator | np.ndarray[Any, Any] | Callable[..., Any],
    b: np.ndarray[Any, Any],
    tol: float = 1e-9,
    max_iter: int = 500,
    restart: int | None = None,
    x0: np.ndarray[Any, Any] | None = None,
) -> GMRESResult:
    """Solve op(x) = b by GMRES.

    Args:
        op: Square linear operator, dense matrix or matvec callable.
        b: Right-hand side.
        tol: Relative residual target.
        max_iter: Maximum total Arnoldi steps.
        restart: Basis size per cycle; None keeps the full basis.
        x0: Initial guess (zero when omitted).

    Returns:
        GMRESResult with the solution and residual history.

    Raises:
        DimensionError: If op and b sizes disagree.
        ConvergenceError: On non-convergence within max_iter or on stagnation.
    """
    rhs = np.asarray(b, dtype=np.complex128).ravel()
    n = rhs.size
    operator = _as_operator(op, n)
    if operator.shape != (n, n):
        raise DimensionError(
            "Operator shape does not match right-hand side",
            details={"operator_shape": list(operator.shape), "rhs_size": n},
        )
    if max_iter < 1 or tol <= 0:
        raise ValueError("max_iter must be >= 1 and tol > 0")

    bnorm = float(np.linalg.norm(rhs))
    x = np.zeros(n, dtype=np.complex128) if x0 is None else np.array(x0, dtype=np.complex128)
    if bnorm == 0.0:
        return GMRESResult(x=np.zeros(n, dtype=np.complex128), converged=True, iterations=0,
                           residual_history=[0.0])

    cycle_len = max_iter if restart is None else max(1, restart)
    history: list[float] = []
    total = 0
    restarts = 0

    while True:
        r = rhs - operator.matvec(x).ravel() if np.any(x) else rhs.copy()
        beta = float(np.linalg.norm(r))
        rel = beta / bnorm
        if not history:
            history.append(rel)
        if rel <= tol:
            return GMRESResult(x=x, converged=True, iterations=total,
                               residual_history=history, restarts=restarts)
        if total >= max_iter:
            break

        kmax = min(cycle_len, max_iter - total)
        basis = np.zeros((n, kmax + 1), dtype=np.complex128)
        hess = np.zeros((kmax + 1, kmax), dtype=np.complex128)
        cs = np.zeros(kmax)
        sn = np.zeros(kmax, dtype=np.complex128)
        g = np.zeros(kmax + 1, dtype=np.complex128)
        g[0] = beta
        basis[:, 0] = r / beta

        steps = 0
        breakdown = False
        for j in range(kmax):
            w = np.array(operator.matvec(basis[:, j]), dtype=np.complex128).ravel()
            wnorm = float(np.linalg.norm(w))
            for _ in range(2):
                for i in range(j + 1):
                    h = np.vdot(basis[:, i], w)
                    hess[i, j] += h
                    w -= h * basis[:, i]
            hnext = float(np.linalg.norm(w))
            hess[j + 1, j] = hnext

            for i in range(j):
                upper = cs[i] * hess[i, j] + sn[i] * hess[i + 1, j]
                hess[i + 1, j] = -np.conj(sn[i]) * hess[i, j] + cs[i] * hess[i + 1, j]
                hess[i, j] = upper
            c, s = _givens(complex(hess[j, j]), complex(hess[j + 1, j]))
            cs[j], sn[j] = c, s
            hess[j, j] = c * hess[j, j] + s * hess[j + 1, j]
            hess[j + 1, j] = 0.0
            g[j + 1] = -np.conj(s) * g[j]
            g[j] = c * g[j]

            steps = j + 1
            total += 1
            rel = float(abs(g[j + 1])) / bnorm
            history.append(rel)
            logger.debug("linalg.gmres_iteration", iteration=total, relative_residual=rel)

            breakdown = hnext <= BREAKDOWN_TOL * max(wnorm, np.finfo(np.float64).tiny)
            if rel <= tol or breakdown:
                break
            basis[:, j + 1] = w / hnext

        y = scipy.linalg.solve_triangular(hess[:steps, :steps], g[:steps], check_finite=False)
        x = x + basis[:, :steps] @ y

        if rel <= tol:
            return GMRESResult(x=x, converged=True, iterations=total,
                               residual_history=history, restarts=restarts)
        if breakdown:
            raise ConvergenceError(
                "GMRES stagnated: Krylov space became invariant above tolerance",
                details={"residual_history": history, "iterations": total},
            )
        if total >= max_iter:
            break
        restarts += 1
        logger.info("linalg.gmres_restart", restarts=restarts, relative_residual=rel)

    raise ConvergenceError(
        f"GMRES did not reach tol={tol:g} in {max_iter} iterations",
        details={"residual_history": history, "iterations": total, "tol": tol},
    )
