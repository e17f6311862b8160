"""Real-argument cylinder functions J_n, Y_n, H_n^(1)."""

from proxyscat.features.specfun.bessel import (
    CylinderSeq,
    bessel_j,
    bessel_j_derivative,
    bessel_y,
    hankel1,
    hankel1_derivative,
    hankel1_seq,
)

__all__ = [
    "CylinderSeq",
    "bessel_j",
    "bessel_j_derivative",
    "bessel_y",
    "hankel1",
    "hankel1_derivative",
    "hankel1_seq",
]
