"""Dense complex LU with pivot diagnostics.

Wraps LAPACK getrf/getrs through scipy.linalg and adds what the solvers need on
top: zero-pivot detection with the offending index, and a 1-norm condition
estimate (gecon) that flags ill-conditioned systems in the logs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np
import scipy.linalg  # type: ignore[import-untyped]
import structlog

from proxyscat.core.exceptions import DimensionError, SingularMatrixError

logger = structlog.get_logger()

ComplexArray = np.ndarray[Any, np.dtype[np.complexfloating[Any, Any]]]

ILL_CONDITIONED_THRESHOLD = 1e10


@dataclass(frozen=True)
class LUFactorization:
    """Partial-pivoting LU factors of a square complex matrix.

    Attributes:
        lu: Packed L and U factors (LAPACK layout).
        piv: Pivot indices from getrf.
        condition_estimate: Estimated 1-norm condition number.
    """

    lu: ComplexArray
    piv: np.ndarray[Any, np.dtype[np.int32]]
    condition_estimate: float

    @property
    def n(self) -> int:
        """Order of the factored matrix."""
        return int(self.lu.shape[0])

    @property
    def ill_conditioned(self) -> bool:
        """True when the condition estimate exceeds the warning threshold."""
        return self.condition_estimate > ILL_CONDITIONED_THRESHOLD

    def solve(self, rhs: np.ndarray[Any, Any]) -> ComplexArray:
        """Solve A X = B for one or more right-hand sides.

        Args:
            rhs: Vector of length n or matrix with n rows.

        Returns:
            Solution with the same shape as rhs.

        Raises:
            DimensionError: If rhs has the wrong number of rows.
        """
        rhs = np.asarray(rhs)
        if rhs.shape[0] != self.n:
            raise DimensionError(
                "Right-hand side rows do not match matrix order",
                details={"rows": int(rhs.shape[0]), "order": self.n},
            )
        result: ComplexArray = scipy.linalg.lu_solve(
            (self.lu, self.piv), rhs.astype(np.complex128, copy=False), check_finite=False
        )
        return result


def lu_factor(matrix: np.ndarray[Any, Any]) -> LUFactorization:
    """Factor a square matrix with partial pivoting.

    Args:
        matrix: Square matrix (real or complex).

    Returns:
        LUFactorization holding factors, pivots and a condition estimate.

    Raises:
        DimensionError: If the matrix is not square.
        SingularMatrixError: If a pivot vanishes relative to the matrix scale.
    """
    a = np.asarray(matrix, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError("LU requires a square matrix", details={"shape": list(a.shape)})
    if not np.all(np.isfinite(a)):
        raise SingularMatrixError("Matrix has non-finite entries", details={"pivot_index": None})

    n = a.shape[0]
    anorm = float(np.abs(a).sum(axis=0).max()) if n else 0.0
    if n == 0:
        return LUFactorization(lu=a, piv=np.zeros(0, dtype=np.int32), condition_estimate=1.0)

    lu, piv, info = scipy.linalg.lapack.zgetrf(a)
    pivots = np.abs(np.diag(lu))
    scale = float(np.abs(a).max())
    tiny = n * np.finfo(np.float64).eps * scale
    bad = np.flatnonzero(pivots <= tiny)
    if info > 0 or bad.size:
        index = int(bad[0]) if bad.size else int(info) - 1
        raise SingularMatrixError(
            "Zero pivot encountered in LU factorization",
            details={"pivot_index": index, "pivot_magnitude": float(pivots[index]), "n": n},
        )

    gecon = scipy.linalg.lapack.zgecon
    rcond, _ = gecon(lu, anorm, norm="1")
    cond = float(np.inf) if rcond == 0 else float(1.0 / rcond)
    factorization = LUFactorization(lu=lu, piv=piv.astype(np.int32), condition_estimate=cond)
    if factorization.ill_conditioned:
        logger.warning("linalg.ill_conditioned", n=n, condition_estimate=cond)
    return factorization


def lu_solve(matrix: np.ndarray[Any, Any] | LUFactorization, rhs: np.ndarray[Any, Any]) -> ComplexArray:
    """Solve A X = B, factoring A first when given a raw matrix.

    Args:
        matrix: Square matrix or an existing factorization.
        rhs: Right-hand side(s).

    Returns:
        Solution array.
    """
    factorization = matrix if isinstance(matrix, LUFactorization) else lu_factor(matrix)
    return factorization.solve(rhs)
