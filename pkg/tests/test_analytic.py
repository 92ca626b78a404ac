import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from halfplane.analytic import (
    LaurentQD,
    PowerSeriesMap,
    analytic_residue,
    circumference,
    h_schedule,
    leading_order_pullback,
    planar_end_model,
    pullback_series,
    residue_details,
    residue_normalization,
    scaling_exponent,
    tracked_sqrt,
    truncation_polygon,
)
from halfplane.errors import BranchAmbiguity, InvalidParams, SingularContour, TruncationInsufficient


class TestResidue:
    @pytest.mark.parametrize("n", [4, 6, 8])
    @pytest.mark.parametrize("a", [0.0, 0.5, 1.0, 2.0])
    def test_standard_grid(self, n, a):
        assert analytic_residue(LaurentQD.standard(n, a)) == pytest.approx(math.pi * a, abs=1e-6)

    @pytest.mark.parametrize("n", [2, 4, 6])
    def test_zero_parameter(self, n):
        assert analytic_residue(LaurentQD.standard(n, 0.0)) < 1e-9

    @pytest.mark.parametrize("C", [0.5, 1.0, 3.0])
    def test_cylinder(self, C):
        assert analytic_residue(LaurentQD.cylinder(C)) == pytest.approx(2 * math.pi * C, abs=1e-6)

    @pytest.mark.parametrize("n", [3, 5])
    def test_odd_order_vanishes(self, n):
        q = LaurentQD({-(n + 2): 1.0, -3: 0.7})
        d = residue_details(q)
        assert d.value == 0 and d.loops == 2 and d.defect < 1e-9

    def test_normalization_is_pi(self):
        assert residue_normalization(4, 1.0) == pytest.approx(math.pi, abs=1e-9)

    def test_sample_doubling_converged(self):
        q = LaurentQD.standard(6, 1.3)
        assert abs(analytic_residue(q, samples=2**14) - analytic_residue(q, samples=2**15)) < 1e-9

    def test_coarse_sampling(self):
        with pytest.raises(BranchAmbiguity):
            analytic_residue(LaurentQD.standard(8, 1.0), samples=20)

    def test_contour_through_zero(self):
        q = LaurentQD.standard(4, 1.0)
        r = float(np.min(np.abs(q.other_singularities())))
        with pytest.raises(SingularContour):
            analytic_residue(q, r=r * 1.5)

    def test_low_order_rejected(self):
        with pytest.raises(InvalidParams):
            analytic_residue(LaurentQD({-1: 1.0}))

    def test_odd_standard_has_no_residue_term(self):
        with pytest.raises(InvalidParams):
            LaurentQD.standard(3, 1.0)

    def test_tracked_sqrt_continuous(self):
        t = np.linspace(0, 2 * np.pi, 400, endpoint=False)
        s = tracked_sqrt(np.exp(1j * t))
        assert np.allclose(s, np.exp(0.5j * t))


class TestCircumference:
    def test_closed_form(self):
        r = 0.01
        got = circumference(LaurentQD.standard(4), r)
        assert got == pytest.approx(2 * math.pi / r**2, rel=1e-3)

    def test_flat_plane(self):
        assert circumference(LaurentQD({0: 1.0}), 0.3) == pytest.approx(2 * math.pi * 0.3, rel=1e-12)

    @pytest.mark.parametrize("n", [4, 6])
    def test_halving_ratio(self, n):
        q = LaurentQD.standard(n, 1.0)
        ratio = circumference(q, 0.0005) / circumference(q, 0.001)
        assert ratio == pytest.approx(2 ** (n / 2), rel=0.01)

    @pytest.mark.parametrize("n,a", [(4, 0.0), (6, 1.0), (4, 1.0), (8, 0.5)])
    def test_exponent(self, n, a):
        slope = scaling_exponent(LaurentQD.standard(n, a), 1e-3, 1e-2)
        assert slope == pytest.approx(-n / 2, rel=0.01)

    def test_cylinder_exponent_zero(self):
        assert abs(scaling_exponent(LaurentQD.cylinder(2.0), 1e-3, 1e-2)) < 1e-9


class TestPullback:
    def test_linear(self):
        assert leading_order_pullback(LaurentQD({-4: 1.0}), PowerSeriesMap([2.0])) == pytest.approx(0.25)

    def test_series_against_direct_expansion(self):
        # (q o f) f'^2 evaluated numerically on a small circle, Laurent coefficients by FFT
        q = LaurentQD({-5: 3.0, -3: 1 - 1j, 0: 2.0})
        f = PowerSeriesMap([1.5 + 0.5j, -0.3, 0.2j])
        N, r = 256, 0.05
        z = r * np.exp(2j * np.pi * np.arange(N) / N)
        vals = q(f(z)) * f.derivative(z) ** 2
        ser = pullback_series(q, f, 4)
        for k, c in ser.items():
            direct = np.mean(vals * z ** (-k))
            assert abs(direct - c) < 1e-8 * max(1, abs(c))

    @given(
        st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False), min_size=1, max_size=5)
        .filter(lambda c: abs(c[0]) > 0.2),
        st.integers(3, 9),
        st.complex_numbers(min_magnitude=0.1, max_magnitude=5, allow_nan=False, allow_infinity=False),
    )
    def test_law(self, coeffs, n, a_n):
        f = PowerSeriesMap(coeffs)
        lead = leading_order_pullback(LaurentQD({-n: a_n, -n + 1: 1.0}), f)
        want = abs(coeffs[0]) ** (2 - n) * abs(a_n)
        assert abs(abs(lead) - want) <= 1e-12 * max(1.0, want)

    def test_rotation_invariant(self):
        q = LaurentQD({-6: 2 - 1j})
        f = [0.7 + 0.2j, 1.0, -2.0]
        base = abs(leading_order_pullback(q, PowerSeriesMap(f)))
        u = cmath.exp(0.9j)
        assert abs(leading_order_pullback(q, PowerSeriesMap([u * c for c in f]))) == pytest.approx(base, rel=1e-12)

    def test_unit_derivative(self):
        q = LaurentQD({-5: 3.0})
        assert abs(leading_order_pullback(q, PowerSeriesMap([cmath.exp(0.4j), 5.0]))) == pytest.approx(3.0)

    def test_errors(self):
        with pytest.raises(InvalidParams):
            PowerSeriesMap([0.0, 1.0])
        with pytest.raises(TruncationInsufficient):
            pullback_series(LaurentQD({-4: 1.0}), PowerSeriesMap([1.0]), -1)
        with pytest.raises(InvalidParams):
            leading_order_pullback(LaurentQD({-2: 1.0}), PowerSeriesMap([1.0]))


class TestTruncation:
    def test_odd_zero(self):
        p = truncation_polygon(3, 0, 10)
        assert p.sides == (10,) * 6 and p.alternating_sum == 0

    def test_even(self):
        p = truncation_polygon(4, 1, 10)
        assert p.horizontal == (11, 10, 10, 10) and p.alternating_sum == 1

    @pytest.mark.parametrize("args", [(3, 1, 10), (1, 0, 10), (4, 1, 0.5), (4, -1, 10)])
    def test_invalid(self, args):
        with pytest.raises(InvalidParams):
            truncation_polygon(*args)


class TestEndModel:
    def test_closed_form_distance(self):
        m = planar_end_model(4, 0.0, 100.0)
        assert m.dist0 == pytest.approx((2 * 100 / math.sqrt(2)) ** -0.5, rel=1e-3)

    @pytest.mark.parametrize("a", [0.0, 0.01])
    def test_scaling(self, a):
        ratio = planar_end_model(4, a, 100.0).dist0 / planar_end_model(4, a, 400.0).dist0
        assert ratio == pytest.approx(4 ** (2 / 4), rel=0.02)

    def test_small_residue_negligible(self):
        assert planar_end_model(4, 0.01, 100).dist0 == pytest.approx(planar_end_model(4, 0, 100).dist0, rel=0.01)

    def test_closes_up(self):
        m = planar_end_model(6, 1.0, 40.0)
        assert m.closure_defect < 1e-6 and abs(m.alpha) == pytest.approx(1 / math.pi)

    def test_monotone_in_H(self):
        d = [planar_end_model(4, 0.5, H).dist0 for H in (20, 40, 80, 160)]
        assert all(x > y for x, y in zip(d, d[1:]))

    def test_H_too_small(self):
        with pytest.raises(InvalidParams):
            planar_end_model(4, 2.0, 15.0)


class TestSchedule:
    def test_values(self):
        assert h_schedule(1, 0, 6) == 1
        assert h_schedule(1, 3, 4) == 64

    def test_band(self):
        d = [planar_end_model(4, 0.0, h_schedule(4, i, 4)).dist0 * 2**i for i in range(9)]
        assert max(d) / min(d) < 2
        ratios = [planar_end_model(4, 0.0, h_schedule(4, i + 1, 4)).dist0 / planar_end_model(4, 0.0, h_schedule(4, i, 4)).dist0 for i in range(3)]
        assert all(r == pytest.approx(0.5, rel=0.02) for r in ratios)
