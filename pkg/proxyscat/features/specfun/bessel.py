"""Bessel and Hankel functions of integer order and real argument.

Values come from scipy.special (AMOS/cephes); this module adds the domain
checks the kernels rely on and the order-sequence builder used by the disk
series oracle.

CRITICAL: Y_n and H_n are undefined at x = 0; passing it raises DomainError
rather than returning -inf.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np
import scipy.special  # type: ignore[import-untyped]

from proxyscat.core.exceptions import DomainError

FloatArray = np.ndarray[Any, np.dtype[np.floating[Any]]]
ComplexArray = np.ndarray[Any, np.dtype[np.complexfloating[Any, Any]]]
ArrayLike = float | int | np.ndarray[Any, Any]


def _check_order(n: ArrayLike) -> np.ndarray[Any, Any]:
    orders = np.asarray(n)
    if orders.dtype.kind not in "iu":
        if not np.all(np.mod(orders, 1) == 0):
            raise DomainError("Order must be an integer", details={"order": np.asarray(n).tolist()})
        orders = orders.astype(np.int64)
    if np.any(orders < 0):
        raise DomainError("Order must be non-negative", details={"order": orders.tolist()})
    return orders


def _check_argument(x: ArrayLike, allow_zero: bool) -> FloatArray:
    args = np.asarray(x, dtype=np.float64)
    if np.any(np.isnan(args)):
        raise DomainError("Argument is NaN")
    bad = args < 0 if allow_zero else args <= 0
    if np.any(bad):
        raise DomainError(
            "Argument outside domain" + ("" if allow_zero else " (singular at x <= 0)"),
            details={"min_argument": float(args.min())},
        )
    return args


def bessel_j(n: ArrayLike, x: ArrayLike) -> Any:
    """Bessel function of the first kind J_n(x).

    Args:
        n: Non-negative integer order (scalar or array).
        x: Argument x >= 0 (scalar or array).

    Returns:
        J_n(x), broadcast over n and x.

    Raises:
        DomainError: If x < 0 or n is not a non-negative integer.
    """
    return scipy.special.jv(_check_order(n), _check_argument(x, allow_zero=True))


def bessel_y(n: ArrayLike, x: ArrayLike) -> Any:
    """Bessel function of the second kind Y_n(x).

    Raises:
        DomainError: If x <= 0 (logarithmic singularity at the origin).
    """
    return scipy.special.yv(_check_order(n), _check_argument(x, allow_zero=False))


def hankel1(n: ArrayLike, x: ArrayLike) -> Any:
    """Hankel function of the first kind H_n(x) = J_n(x) + i Y_n(x).

    Raises:
        DomainError: If x <= 0.
    """
    return scipy.special.hankel1(_check_order(n), _check_argument(x, allow_zero=False))


def bessel_j_derivative(n: ArrayLike, x: ArrayLike) -> Any:
    """Derivative J_n'(x)."""
    return scipy.special.jvp(_check_order(n), _check_argument(x, allow_zero=True))


def hankel1_derivative(n: ArrayLike, x: ArrayLike) -> Any:
    """Derivative H_n'(x)."""
    return scipy.special.h1vp(_check_order(n), _check_argument(x, allow_zero=False))


@dataclass(frozen=True)
class CylinderSeq:
    """Values C_0(x) .. C_{order_max}(x) of one cylinder function.

    Attributes:
        order_max: Highest order held.
        x: Common argument.
        values: Complex array of length order_max + 1.
    """

    order_max: int
    x: float
    values: ComplexArray

    def __getitem__(self, n: int) -> complex:
        return complex(self.values[n])

    def __len__(self) -> int:
        return self.order_max + 1

    def recurrence_residual(self) -> float:
        """Max relative residual of C_{n+1} - (2n/x) C_n + C_{n-1} over interior orders."""
        if self.order_max < 2:
            return 0.0
        v = self.values
        n = np.arange(1, self.order_max)
        middle = (2.0 * n / self.x) * v[1:-1]
        residual = np.abs(v[2:] - middle + v[:-2])
        scale = np.maximum.reduce([np.abs(v[2:]), np.abs(middle), np.abs(v[:-2])])
        return float(np.max(residual / scale))


def hankel1_seq(order_max: int, x: float) -> CylinderSeq:
    """H_0(x) .. H_{order_max}(x) in one pass.

    J_n comes from the library routine for every order; Y_n is built by upward
    recurrence from Y_0, Y_1, which is stable because Y_n grows with n.

    Args:
        order_max: Highest order, >= 0.
        x: Argument, > 0.

    Returns:
        CylinderSeq of H_n^(1)(x).

    Raises:
        DomainError: If order_max < 0 or x <= 0.
    """
    if order_max < 0:
        raise DomainError("order_max must be non-negative", details={"order_max": order_max})
    xv = float(_check_argument(x, allow_zero=False))
    orders = np.arange(order_max + 1)
    j = scipy.special.jv(orders, xv)
    y = np.empty(order_max + 1)
    y[0] = scipy.special.y0(xv)
    if order_max >= 1:
        y[1] = scipy.special.y1(xv)
    for n in range(1, order_max):
        y[n + 1] = (2.0 * n / xv) * y[n] - y[n - 1]
    return CylinderSeq(order_max=order_max, x=xv, values=j + 1j * y)
