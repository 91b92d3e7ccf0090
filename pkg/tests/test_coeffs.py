import math

import numpy as np
import pytest

import oracles
from nuzeta.coeffs import (
    CoeffTable,
    build_table,
    coeff_a,
    coeff_b,
    cubic_p,
    delta4_check,
    delta4_p,
    duality_gap,
    lemma_residual,
    p_eval,
    summatory,
)
from nuzeta.errors import OutOfRange
from nuzeta.special import STIELTJES_C0, STIELTJES_C1, STIELTJES_C2

LN2 = math.log(2.0)
LN3 = math.log(3.0)


class TestCoefficients:
    def test_hand_values(self, table1k):
        assert table1k.a[1] == 0.0
        assert table1k.a[2] == pytest.approx(LN2 ** 2, rel=1e-12)
        assert table1k.a[4] == pytest.approx(4 * LN2 ** 2, rel=1e-12)
        assert table1k.a[6] == pytest.approx(2 * LN2 ** 2 + 2 * LN3 ** 2, rel=1e-12)

    def test_prime_collapse(self, table1k):
        for p in (5, 11, 97, 997):
            assert coeff_a(p, table1k) == pytest.approx(math.log(p) ** 2, rel=1e-12)

    def test_nonnegative_and_tau_lambda(self, table1k):
        assert (table1k.a[1:] >= 0).all()
        assert table1k.tau[12] == 6
        assert table1k.lam[8] == pytest.approx(LN2)
        assert table1k.lam[6] == 0.0

    def test_duality_enforced(self, table5):
        assert duality_gap(10 ** 4) <= 1e-9

    def test_b_values(self, table1k):
        assert coeff_b(3, table1k) == pytest.approx(LN3 ** 2, rel=1e-12)
        assert coeff_b(2, table1k) == pytest.approx(LN2 ** 2, rel=1e-12)
        assert coeff_b(4, table1k) == pytest.approx(-4 * LN2 ** 2, rel=1e-12)

    def test_b_equals_a_for_odd(self, table1k):
        odd = np.arange(1, table1k.limit + 1, 2)
        assert np.array_equal(table1k.b[odd], table1k.a[odd])

    def test_out_of_range(self, table1k):
        with pytest.raises(OutOfRange):
            coeff_b(5000, table1k)
        with pytest.raises(OutOfRange):
            build_table(1)


class TestSummatory:
    def test_strict_boundary_for_a(self, table1k):
        assert summatory(2.0, "A", table1k) == 0.0
        assert summatory(5.0, "A", table1k) == pytest.approx(
            5 * LN2 ** 2 + LN3 ** 2, rel=1e-12)
        # n <= x for B
        assert summatory(2.0, "B", table1k) == pytest.approx(LN2 ** 2, rel=1e-12)

    def test_a_monotone(self, table1k):
        assert (np.diff(table1k.a_prefix) >= 0).all()

    def test_b_inversion(self, table5):
        # sum_{n<=x} b(n) = sum_m C(4,m)(-2)^m sum_{n <= x/2^m} a(n);
        # roundoff scales with the A(x)-sized intermediates, not with B(x)
        for x in (97.0, 1024.0, 33333.0):
            lhs = summatory(x, "B", table5)
            rhs = sum(math.comb(4, m) * (-2.0) ** m
                      * float(table5.a_prefix[int(x / 2 ** m)])
                      for m in range(5))
            scale = float(table5.a_prefix[int(x)])
            assert abs(lhs - rhs) <= 1e-12 * scale

    def test_b_growth_stays_bounded(self, table5):
        vals = [abs(summatory(float(x), "B", table5)) / float(x) ** 0.45
                for x in np.geomspace(100, 1e5, 60)]
        assert max(vals) < 20.0

    def test_dirichlet_series_sanity(self, table5):
        from nuzeta.nu import nu_raw
        n = np.arange(1, table5.limit + 1, dtype=np.float64)
        series = float(np.sum(table5.a[1:] / n ** 5))
        assert abs(series - nu_raw(5.0).real) < 1e-6


class TestCubic:
    def test_leading_coefficient_exact(self):
        assert cubic_p().c3 == 1.0 / 6.0

    def test_constant_term(self):
        p0 = 4 * STIELTJES_C2 + 4 * STIELTJES_C1 + 2 * STIELTJES_C0 - 1
        assert p_eval(0.0) == pytest.approx(p0, rel=1e-14)

    @pytest.mark.parametrize("t", [1.0, 10.0, 100.0])
    def test_delta4_vanishes(self, t):
        assert abs(delta4_p(t)) < 1e-10

    def test_delta4_check_default(self):
        assert delta4_check() < 1e-10

    def test_delta1_on_cubic_term(self):
        # Delta applied to t^3/6 has degree 2, leading coefficient -log(2)/2;
        # symbolic expansion: (t^3 - (t - log 2)^3)/6
        # = (log2/2) t^2 - (log2^2/2) t + log2^3/6
        for t in (0.0, 3.0, 17.5):
            delta1 = t ** 3 / 6 - (t - LN2) ** 3 / 6
            expect = (LN2 / 2) * t * t - (LN2 ** 2 / 2) * t + LN2 ** 3 / 6
            assert delta1 == pytest.approx(expect, rel=1e-12, abs=1e-12)


class TestLemmaResidual:
    @pytest.mark.parametrize("x", [1000.5, 99999.5])
    def test_constant_ten_envelope(self, x, table5):
        r, bound = lemma_residual(x, table5)
        assert bound == pytest.approx(10 * math.sqrt(x) * math.log(x) ** 2)
        assert abs(r) <= bound

    def test_relaxed_exponent_bounded(self, artifacts):
        tb = artifacts.table6()
        vals = []
        for x in np.geomspace(100, 1e6, 120):
            x = min(float(math.floor(x)) + 0.5, 1e6 - 0.5)
            r, _ = lemma_residual(x, tb)
            vals.append(abs(r) / x ** (1.0 / 3.0 + 0.1))
        assert max(vals) < 10.0

    def test_out_of_range(self, table1k):
        with pytest.raises(OutOfRange):
            lemma_residual(2.0, table1k)
        with pytest.raises(OutOfRange):
            lemma_residual(5000.0, table1k)

    def test_wrong_stieltjes_sign_would_blow_up(self, table5):
        # the C1 sign convention is pinned by the residual staying sublinear:
        # flipping it makes A(x) - x p(log x) grow ~ 8 C1 x log x
        x = 90000.5
        r, bound = lemma_residual(x, table5)
        flipped = r - x * (-8 * STIELTJES_C1) * math.log(x)
        assert abs(r) <= bound < abs(flipped)
