import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wplink.errors import DomainError
from wplink.numerics import lambert_w0, maximize_scalar

INV_E = math.exp(-1.0)
# omega constant: the unique w with w*e^w = 1
OMEGA = 0.5671432904097838


def residual(w, x):
    return abs(w * math.exp(w) - x)


class TestLambertW0:
    def test_fixed_points(self):
        assert lambert_w0(0.0) == 0.0
        assert abs(lambert_w0(math.e) - 1.0) <= 1e-14
        assert abs(lambert_w0(1.0) - OMEGA) <= 1e-14
        assert abs(lambert_w0(-INV_E) - (-1.0)) <= 1e-7

    def test_negative_branch_value(self):
        assert lambert_w0(-0.18399) == pytest.approx(-0.23204351638163465, rel=1e-13)

    def test_near_branch_point(self):
        x = -INV_E + 1e-10
        w = lambert_w0(x)
        assert w >= -1.0
        assert residual(w, x) <= 1e-12 * max(1.0, abs(x))

    def test_clamps_roundoff_below_branch(self):
        assert lambert_w0(-INV_E - 1e-16) == pytest.approx(-1.0, abs=1e-7)

    def test_rejects_below_branch(self):
        with pytest.raises(DomainError):
            lambert_w0(-INV_E - 1e-9)
        with pytest.raises(DomainError):
            lambert_w0(float("nan"))

    def test_large_argument(self):
        x = 1e300
        w = lambert_w0(x)
        # w + ln w = ln x for the exact solution
        assert w + math.log(w) == pytest.approx(math.log(x), rel=1e-13)

    @given(st.floats(min_value=-36.0, max_value=300.0))
    def test_residual_contract_log_range(self, t):
        x = math.exp(t)
        w = lambert_w0(x)
        assert residual(w, x) <= 1e-12 * max(1.0, abs(x))

    @given(st.floats(min_value=-INV_E, max_value=0.0))
    def test_residual_contract_negative_range(self, x):
        w = lambert_w0(x)
        assert -1.0 <= w <= 0.0
        assert residual(w, x) <= 1e-12 * max(1.0, abs(x))

    def test_monotone_increasing(self):
        xs = np.geomspace(1e-8, 1e8, 200)
        ws = [lambert_w0(float(x)) for x in xs]
        assert all(b > a for a, b in zip(ws, ws[1:]))


class TestMaximizeScalar:
    def test_quadratic_peak(self):
        x, fx = maximize_scalar(lambda t: -(t - 0.3) ** 2, 0.0, 1.0, tol=1e-10)
        assert x == pytest.approx(0.3, abs=1e-8)
        assert fx == pytest.approx(0.0, abs=1e-15)

    def test_peak_at_left_endpoint(self):
        x, fx = maximize_scalar(lambda t: -t, 2.0, 5.0)
        assert x == pytest.approx(2.0, abs=1e-6)
        assert fx == pytest.approx(-x)

    def test_peak_at_right_endpoint(self):
        x, _ = maximize_scalar(lambda t: t, 2.0, 5.0)
        assert x == pytest.approx(5.0, abs=1e-6)

    def test_narrow_bump_found_by_prescan(self):
        # width ~0.05 around 0.77: far narrower than a blind golden-section
        # bracket but wider than the 64-point grid spacing
        def f(t):
            return math.exp(-(((t - 0.77) / 0.02) ** 2))

        x, fx = maximize_scalar(f, 0.0, 1.0, tol=1e-10)
        assert x == pytest.approx(0.77, abs=1e-7)
        assert fx == pytest.approx(1.0, rel=1e-12)

    def test_plateau_returns_inside(self):
        x, fx = maximize_scalar(lambda t: 1.0, 0.0, 1.0)
        assert 0.0 <= x <= 1.0
        assert fx == 1.0

    def test_invalid_bracket(self):
        with pytest.raises(DomainError):
            maximize_scalar(lambda t: t, 1.0, 1.0)

    @given(st.floats(min_value=0.05, max_value=0.95))
    def test_recovers_random_quadratic_peak(self, peak):
        x, _ = maximize_scalar(lambda t: -(t - peak) ** 2, 0.0, 1.0, tol=1e-9)
        assert x == pytest.approx(peak, abs=1e-6)
