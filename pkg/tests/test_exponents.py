"""Tests for the exponent-optimization pipeline."""

import math
from fractions import Fraction

import numpy as np
import pytest

from latticelab.exponents import (
    ExponentGrid,
    algebra_identity,
    check_ineq_1,
    check_ineq_2,
    corollary_exponent,
    exponent_final,
    exponent_final_exact,
    export_curve,
    ineq_2_polynomial_exact,
    q_of_x,
    theta_star,
)

THETA_REF = 0.3144831759741


class TestThetaStar:
    def test_value(self):
        res = theta_star()
        assert abs(res.theta_star - THETA_REF) < 1e-10

    def test_residual_below_tol(self):
        res = theta_star(tol=1e-13)
        assert res.residual < 1e-12

    def test_bracket_sign_change(self):
        lo, hi = -0.35, -0.3
        g_lo = exponent_final(lo) + lo
        g_hi = exponent_final(hi) + hi
        assert g_lo < 0 < g_hi

    def test_in_expected_window(self):
        t = theta_star().theta_star
        assert 0.3 <= t <= 0.35

    def test_tol_floor(self):
        with pytest.raises(ValueError):
            theta_star(tol=1e-15)


class TestQofX:
    def test_endpoint_lower(self):
        assert abs(q_of_x(-3.0 / 8.0) - 4.0) < 1e-12

    def test_endpoint_upper(self):
        q = q_of_x(-theta_star().theta_star)
        assert 4.29 <= q <= 4.30

    def test_strictly_increasing(self):
        xs = ExponentGrid.default(10_001).points()
        qs = np.array([q_of_x(float(x)) for x in xs])
        assert np.all(np.diff(qs) > 0)

    def test_domain_error(self):
        with pytest.raises(ValueError):
            q_of_x(-0.45)
        with pytest.raises(ValueError):
            q_of_x(-0.25)


class TestExponentFinal:
    def test_lower_endpoint_is_5_16(self):
        assert abs(exponent_final(-3.0 / 8.0) - 0.3125) < 1e-12

    def test_lower_endpoint_exact(self):
        assert exponent_final_exact(Fraction(-3, 8)) == Fraction(5, 16)

    def test_exact_raises_off_square_points(self):
        with pytest.raises(ValueError):
            exponent_final_exact(Fraction(-1, 3))

    def test_upper_endpoint_equals_theta(self):
        t = theta_star().theta_star
        assert abs(exponent_final(-t) - t) < 1e-9

    def test_strictly_increasing(self):
        xs = ExponentGrid.default(10_001).points()
        es = np.array([exponent_final(float(x)) for x in xs])
        assert np.all(np.diff(es) > 0)
        assert abs(es.max() - theta_star().theta_star) < 1e-9


class TestInequalities:
    def test_ineq_1_on_grid(self):
        xs = ExponentGrid.default(2001).points()
        assert all(check_ineq_1(float(x)) for x in xs)

    def test_ineq_2_on_grid(self):
        xs = ExponentGrid.default(2001).points()
        assert all(check_ineq_2(float(x)) for x in xs)

    def test_ineq_2_boundary_exact_zero(self):
        # at x = -3/8 the first factor vanishes identically
        assert ineq_2_polynomial_exact(Fraction(-3, 8))
        x = Fraction(-3, 8)
        assert (8 * x + 3) == 0

    def test_ineq_2_fails_outside(self):
        # product is positive to the right of -683/4888
        assert not ineq_2_polynomial_exact(Fraction(-1, 10))

    def test_spot_point(self):
        assert check_ineq_1(-0.32)
        assert check_ineq_2(-0.32)

    def test_endpoints(self):
        assert check_ineq_1(-3.0 / 8.0)  # vacuous limit q = 4
        assert check_ineq_2(-3.0 / 8.0)  # equality case
        t = theta_star().theta_star
        assert check_ineq_1(-t)
        assert check_ineq_2(-t)


class TestAlgebraIdentity:
    def test_spot_points(self):
        for x in (-0.33, -0.32, -theta_star().theta_star):
            assert algebra_identity(x) < 1e-9

    def test_on_grid(self):
        xs = ExponentGrid.default(2001).points()
        for x in xs:
            x = float(x)
            if q_of_x(x) > 4.0 + 1e-6:
                assert algebra_identity(x) < 1e-9

    def test_rejects_q4_endpoint(self):
        with pytest.raises(ValueError):
            algebra_identity(-3.0 / 8.0)


class TestCorollaryExponent:
    def test_matches_exponent_final(self):
        xs = ExponentGrid.default(2001).points()
        for x in xs:
            x = float(x)
            assert abs(corollary_exponent(x) - exponent_final(x)) < 1e-9

    def test_bounded_by_theta(self):
        t = theta_star().theta_star
        xs = ExponentGrid.default(2001).points()
        for x in xs:
            assert corollary_exponent(float(x)) <= t + 1e-9

    def test_value_at_upper_endpoint(self):
        t = theta_star().theta_star
        assert abs(corollary_exponent(-t) - t) < 1e-9


class TestExportCurve:
    def test_columns(self):
        table = export_curve(n=401)
        assert table.shape == (401, 4)
        np.testing.assert_allclose(table[:, 2], -table[:, 0])
        np.testing.assert_allclose(table[:, 3], table[:, 1] + table[:, 0])

    def test_single_sign_change_at_theta(self):
        table = export_curve(n=4001)
        signs = np.sign(table[:, 3])
        changes = np.nonzero(np.diff(signs))[0]
        assert len(changes) == 1
        x_cross = table[changes[0], 0]
        step = table[1, 0] - table[0, 0]
        assert abs(x_cross - (-theta_star().theta_star)) <= step

    def test_empty_range_rejected(self):
        with pytest.raises(ValueError):
            export_curve(lo=-0.3, hi=-0.38)


class TestGrid:
    def test_endpoints_inclusive(self):
        g = ExponentGrid.default(101)
        pts = g.points()
        assert pts[0] == -3.0 / 8.0
        assert abs(pts[-1] - (-theta_star().theta_star)) < 1e-15
        assert len(pts) == 101

    def test_too_small(self):
        with pytest.raises(ValueError):
            ExponentGrid.default(1)
