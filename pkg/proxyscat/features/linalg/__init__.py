"""Dense LU factorization and matrix-free GMRES."""

from proxyscat.features.linalg.dense import LUFactorization, lu_factor, lu_solve
from proxyscat.features.linalg.gmres import GMRESResult, gmres

__all__ = ["GMRESResult", "LUFactorization", "gmres", "lu_factor", "lu_solve"]
