import math

import numpy as np
import pytest

import oracles
from nuzeta.certificate import (
    CountingConstantsReport,
    eq13_value,
    est1_value,
    est2_series_bound,
    ineq1_margin,
    ineq2_margin,
    log_power_tail,
    phi_infimum,
    q_polynomials,
    r_polynomials,
    series_lower_bound,
    tail_integrals,
    verify_theorem1,
    verify_theorem2_constants,
)
from nuzeta.errors import DivergentIntegral


class TestTails:
    def test_k0_antiderivative(self):
        # sigma int_x^inf t^-sigma dt = sigma x^{1-sigma}/(sigma-1)
        for x, s in ((40.0, 4.25), (7.0, 2.5)):
            assert s * log_power_tail(x, s, 0) == pytest.approx(
                s * x ** (1 - s) / (s - 1), rel=1e-14)

    def test_closed_form_vs_quadrature(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            x = rng.uniform(4.0, 200.0)
            s = rng.uniform(1.3, 9.0)
            poly, sqrt_t = tail_integrals(x, s)
            assert poly == pytest.approx(oracles.quad_tail_poly(x, s), rel=1e-8)
            assert sqrt_t == pytest.approx(oracles.quad_tail_sqrt(x, s), rel=1e-8)

    def test_certificate_point(self):
        poly, sqrt_t = tail_integrals(40.0, 4.25)
        assert poly == pytest.approx(oracles.quad_tail_poly(40.0, 4.25), rel=1e-8)
        assert sqrt_t == pytest.approx(oracles.quad_tail_sqrt(40.0, 4.25), rel=1e-8)

    def test_polynomials_positive_from_four(self):
        for x in (4.0, 10.0, 40.0, 400.0):
            assert all(q > 0 for q in q_polynomials(x))
            assert all(r > 0 for r in r_polynomials(x))

    def test_divergence_guard(self):
        with pytest.raises(DivergentIntegral):
            tail_integrals(40.0, 1.0)
        with pytest.raises(DivergentIntegral):
            tail_integrals(2.0, 4.0)


class TestTheorem1:
    def test_certificate_passes(self, table5):
        rep = verify_theorem1(table5)
        assert rep.valid
        assert rep.ineq1_margin > 0
        assert rep.ineq2_margin > 0
        assert all(m > 0 for _, m in rep.lb_margins)

    def test_sigma0_is_sharp(self, table5):
        # 4.25 is nearly the threshold of the first inequality
        assert ineq1_margin(table5, 40.0, 4.25) > 0
        assert ineq1_margin(table5, 40.0, 4.0) < 0
        assert ineq1_margin(table5, 40.0, 3.0) < 0
        assert ineq2_margin(table5, 40.0, 3.0) < 0

    def test_normalized_margin_monotone(self, table5):
        # the paper's monotone quantity is 2^sigma times the raw margin
        sigmas = (4.25, 5.0, 7.0, 10.0, 20.0)
        norm = [2.0 ** s * ineq1_margin(table5, 40.0, s) for s in sigmas]
        assert all(b > a for a, b in zip(norm[:-1], norm[1:]))

    def test_series_lower_bound_vs_truth(self, table5):
        # the certified bound must sit below the directly summed series value
        n = np.arange(3, table5.limit + 1, dtype=np.float64)
        for s in (4.25, 5.0, 6.0):
            truth = (float(table5.a[2]) / 2.0 ** s
                     - float(np.sum(table5.a[3:] / n ** s)))
            lb = series_lower_bound(table5, 40.0, s)
            assert lb <= truth
            assert truth - lb < 0.01   # and not vacuously weak
            assert lb > 0.5 / 40.0 ** (s / 2.0)


class TestTheorem2Constants:
    def test_eq13_with_positive_exponent(self, table5):
        # printed exponent (2/n)^-5 diverges; +5 is forced by Re(s) = 5
        val = eq13_value(table5)
        assert val > 0.0025
        assert val == pytest.approx(0.4154, abs=2e-3)

    def test_est1_bound_and_location(self):
        worst = max(est1_value(t) for t in np.linspace(150.0, 2000.0, 80))
        assert worst < 1.0 / 140.0
        # dominated by |psi'(5-it)| ~ 1/t: largest at the left endpoint
        assert est1_value(150.0) == pytest.approx(worst, rel=1e-6)

    def test_est2_series_bound(self, table5):
        v = est2_series_bound(table5)
        assert v >= 0.0075
        assert v == pytest.approx(0.0079, abs=2e-4)

    def test_full_report(self, table5):
        rep = verify_theorem2_constants(table5)
        assert isinstance(rep, CountingConstantsReport)
        assert rep.valid
        assert rep.quotient_max_sampled < 135.0
        assert rep.product < 1.0
        assert rep.re_positive_min > 0.0

    def test_phi_infimum_positive(self):
        assert phi_infimum(t_max=100.0, samples=800) > 1e-3


class TestCrossModule:
    def test_certificate_implies_geometry(self, table5):
        from nuzeta.zeros import winding
        assert verify_theorem1(table5).valid
        assert winding((4.25, 10.0, 0.0, 100.0)) == 0
