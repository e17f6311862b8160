"""Tests for cylinder functions against identities and a high-precision oracle."""

import math

import numpy as np
import pytest

from proxyscat.core.exceptions import DomainError
from proxyscat.features.specfun import (
    bessel_j,
    bessel_y,
    hankel1,
    hankel1_seq,
)

EULER_GAMMA = 0.57721566490153286061


def _tolerance(x: float) -> float:
    """Relative tolerance; library accuracy degrades in proportion to large arguments."""
    return 1e-12 * max(1.0, x / 100.0)


def _relative_error(value: float, ref: float, envelope: float) -> float:
    """Error relative to |ref|, or to the oscillation envelope where ref may sit near a zero."""
    return abs(value - ref) / max(abs(ref), envelope)


class TestBesselJ:
    """Tests for J_n."""

    def test_origin_values(self):
        """J_0(0) = 1 and J_n(0) = 0 for n >= 1."""
        assert bessel_j(0, 0.0) == 1.0
        assert bessel_j(1, 0.0) == 0.0
        assert bessel_j(5, 0.0) == 0.0

    def test_against_oracle(self, reference_table):
        """J_n matches the high-precision table."""
        for rec in reference_table:
            envelope = math.hypot(rec.j, rec.y) if rec.x > rec.n else 0.0
            err = _relative_error(float(bessel_j(rec.n, rec.x)), rec.j, envelope)
            assert err <= _tolerance(rec.x), (rec.n, rec.x, err)

    def test_bounded_by_one(self):
        """|J_n(x)| <= 1 on a grid of orders and arguments."""
        x = np.linspace(0.0, 200.0, 2001)
        for n in range(0, 60, 3):
            assert np.all(np.abs(bessel_j(n, x)) <= 1.0)

    def test_parity_of_orders_array(self):
        """Array orders broadcast against a scalar argument."""
        values = bessel_j(np.arange(4), 2.0)
        assert values.shape == (4,)
        assert values[0] == pytest.approx(0.22389077914123567, rel=1e-14)

    def test_negative_argument_rejected(self):
        """Negative x is a domain error."""
        with pytest.raises(DomainError):
            bessel_j(0, -1.0)

    def test_fractional_order_rejected(self):
        """Non-integer orders are a domain error."""
        with pytest.raises(DomainError):
            bessel_j(0.5, 1.0)


class TestBesselY:
    """Tests for Y_n."""

    def test_against_oracle(self, reference_table):
        """Y_n matches the high-precision table."""
        for rec in reference_table:
            envelope = math.hypot(rec.j, rec.y) if rec.x > rec.n else 0.0
            err = _relative_error(float(bessel_y(rec.n, rec.x)), rec.y, envelope)
            assert err <= _tolerance(rec.x), (rec.n, rec.x, err)

    @pytest.mark.parametrize("x", [0.5, 1.0, 5.0, 10.0, 20.0, 100.0])
    def test_wronskian(self, x):
        """J_{n+1} Y_n - J_n Y_{n+1} = 2/(pi x) for n <= 50."""
        n = np.arange(0, 51)
        lhs = bessel_j(n + 1, x) * bessel_y(n, x) - bessel_j(n, x) * bessel_y(n + 1, x)
        np.testing.assert_allclose(lhs, 2.0 / (np.pi * x), rtol=1e-10)

    @pytest.mark.parametrize("x", [1e-3, 1e-6, 1e-9])
    def test_small_argument_log_form(self, x):
        """Y_0(x) - (2/pi) ln(x/2) tends to 2 gamma / pi."""
        remainder = bessel_y(0, x) - (2.0 / np.pi) * np.log(x / 2.0)
        assert remainder == pytest.approx(2.0 * EULER_GAMMA / np.pi, abs=1e-5)

    @pytest.mark.parametrize("x", [0.0, -2.0])
    def test_non_positive_argument_rejected(self, x):
        """x <= 0 is a domain error for Y."""
        with pytest.raises(DomainError):
            bessel_y(0, x)


class TestHankel1:
    """Tests for H_n^(1)."""

    def test_definition(self):
        """H_0 = J_0 + i Y_0 at x = 1."""
        assert hankel1(0, 1.0) == pytest.approx(bessel_j(0, 1.0) + 1j * bessel_y(0, 1.0), rel=1e-15)

    def test_asymptotic_magnitude(self):
        """|H_0(x)| sqrt(x) approaches sqrt(2/pi) at x = 1e3."""
        assert abs(hankel1(0, 1e3)) * math.sqrt(1e3) == pytest.approx(math.sqrt(2 / math.pi), rel=1e-6)

    def test_recurrence(self):
        """H_2 = (2/x) H_1 - H_0 at x = 5."""
        x = 5.0
        assert hankel1(2, x) == pytest.approx((2 / x) * hankel1(1, x) - hankel1(0, x), rel=1e-12)

    def test_zero_argument_rejected(self):
        """x = 0 is a domain error."""
        with pytest.raises(DomainError):
            hankel1(1, 0.0)


class TestHankel1Seq:
    """Tests for hankel1_seq."""

    def test_single_order(self):
        """order_max = 0 holds H_0 only."""
        seq = hankel1_seq(0, 3.0)
        assert len(seq) == 1
        assert seq[0] == pytest.approx(hankel1(0, 3.0), rel=1e-15)

    def test_matches_elementwise(self):
        """Sequence agrees with elementwise calls at x = 7 up to order 30."""
        seq = hankel1_seq(30, 7.0)
        expected = hankel1(np.arange(31), 7.0)
        np.testing.assert_allclose(seq.values, expected, rtol=1e-12)

    def test_large_orders_small_argument_finite(self):
        """x = 0.1, order 40 stays finite although Y_n is huge."""
        seq = hankel1_seq(40, 0.1)
        assert np.all(np.isfinite(seq.values))
        assert abs(seq[40]) > 1e90

    @pytest.mark.parametrize("x", [1.0, 5.0, 20.0, 100.0])
    def test_recurrence_residual(self, x):
        """Three-term recurrence residual stays below 1e-10 relative."""
        assert hankel1_seq(50, x).recurrence_residual() <= 1e-10

    def test_negative_order_max_rejected(self):
        """A negative order_max is a domain error."""
        with pytest.raises(DomainError):
            hankel1_seq(-1, 1.0)
