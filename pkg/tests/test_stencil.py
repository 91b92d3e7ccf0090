import math
from fractions import Fraction

import numpy as np
import pytest

from nuzeta.errors import OutOfRange, StepTooCoarse
from nuzeta.stencil import (
    UNIT_OFFSETS,
    build_stencil,
    exact_unit_weights,
    grid_nu,
    moment_error,
    read_grid,
    self_test,
    write_grid,
)


class TestScheme:
    def test_moment_conditions(self):
        for h in (0.02, 0.01, 0.005):
            assert moment_error(build_stencil(h)) < 1e-13

    def test_monomial_exactness(self):
        sch = build_stencil(0.01)
        s0 = 1 + 1j
        for j in range(9):
            d1 = sum(c * (s0 + d) ** j for c, d in zip(sch.c1, sch.offsets))
            d2 = sum(c * (s0 + d) ** j for c, d in zip(sch.c2, sch.offsets))
            want1 = j * s0 ** (j - 1) if j >= 1 else 0.0
            want2 = j * (j - 1) * s0 ** (j - 2) if j >= 2 else 0.0
            tol = 1e-12 / sch.h ** 2
            assert abs(d1 - want1) < tol
            assert abs(d2 - want2) < tol

    def test_exact_weights_match_solver(self):
        w1, w2 = exact_unit_weights()
        sch = build_stencil(0.01)
        c1 = np.array([float(re) + 1j * float(im) for re, im in w1]) / 0.01
        c2 = np.array([float(re) + 1j * float(im) for re, im in w2]) / 0.01 ** 2
        assert np.max(np.abs(c1 - sch.c1)) < 1e-12 / 0.01
        assert np.max(np.abs(c2 - sch.c2)) < 1e-10 / 0.01 ** 2

    def test_exact_weight_values(self):
        # axes +-1/5, diagonals (+-1 -+ i)/40, center 0
        w1, _ = exact_unit_weights()
        assert w1[0] == (Fraction(0), Fraction(0))
        assert w1[1] == (Fraction(1, 5), Fraction(0))
        assert w1[5] == (Fraction(1, 40), Fraction(-1, 40))

    def test_order_eight_in_high_precision(self):
        import mpmath as mp
        mp.mp.dps = 50
        w1, w2 = exact_unit_weights()
        s0 = mp.mpc(1, 1)
        errs1, errs2 = [], []
        for hs in ("0.02", "0.01", "0.005"):
            h = mp.mpf(hs)
            acc1 = acc2 = mp.mpc(0)
            for (re, im), d in zip(w1, UNIT_OFFSETS):
                w = mp.mpf(re.numerator) / re.denominator \
                    + 1j * mp.mpf(im.numerator) / im.denominator
                acc1 += w * mp.exp(s0 + mp.mpc(int(d.real), int(d.imag)) * h)
            for (re, im), d in zip(w2, UNIT_OFFSETS):
                w = mp.mpf(re.numerator) / re.denominator \
                    + 1j * mp.mpf(im.numerator) / im.denominator
                acc2 += w * mp.exp(s0 + mp.mpc(int(d.real), int(d.imag)) * h)
            errs1.append(float(abs(acc1 / h - mp.exp(s0))))
            errs2.append(float(abs(acc2 / (h * h) - mp.exp(s0))))
        slope1 = np.polyfit(np.log([0.02, 0.01, 0.005]), np.log(errs1), 1)[0]
        slope2 = np.polyfit(np.log([0.02, 0.01, 0.005]), np.log(errs2), 1)[0]
        assert slope1 >= 7.0
        # the symmetric cell kills the 9th moment for f'' as well
        assert slope2 >= 7.0
        assert errs1[0] / errs1[1] >= 2 ** 7

    def test_order_visible_in_float64_for_spiky_function(self):
        # near-pole rational function keeps truncation above roundoff
        a = 1 + 1j + 0.25
        f = lambda s: 1.0 / (s - a)
        s0 = 1 + 1j
        errs = []
        for h in (0.02, 0.01, 0.005):
            sch = build_stencil(h)
            approx = sum(c * f(s0 + d) for c, d in zip(sch.c1, sch.offsets))
            errs.append(abs(approx - (-1.0 / (s0 - a) ** 2)))
        slope = np.polyfit(np.log([0.02, 0.01, 0.005]), np.log(errs), 1)[0]
        assert slope >= 7.0

    def test_warmup_central_difference_constant(self):
        # (f(x+h) - f(x-h))/2h - f' = (1/6) f''' h^2 + O(h^4) for f = sin
        for h in (0.1, 0.05, 0.025):
            lhs = (math.sin(1 + h) - math.sin(1 - h)) / (2 * h) - math.cos(1)
            ratio = lhs / ((1.0 / 6.0) * (-math.cos(1)) * h * h)
            assert ratio == pytest.approx(1.0, abs=2e-3)

    def test_conditioning(self):
        for h in (0.02, 0.01, 0.005):
            sch = build_stencil(h)
            assert np.max(np.abs(sch.c1)) <= 10.0 / h

    def test_h_range_guard(self):
        with pytest.raises(OutOfRange):
            build_stencil(0.5)
        with pytest.raises(OutOfRange):
            build_stencil(1e-8)


class TestGrid:
    def test_probe_agreement_and_budget(self):
        g = grid_nu((-1.0, 3.0, 20.0, 24.0), 0.04)
        rows, cols = g.shape
        assert g.zeta_evals <= rows * cols + 2 * (rows + cols) - 4
        from nuzeta.special import zeta_derivs
        rng = np.random.default_rng(3)
        pts = g.points()
        for _ in range(20):
            i = int(rng.integers(1, rows - 1))
            j = int(rng.integers(1, cols - 1))
            b = zeta_derivs(complex(pts[i, j]))
            direct = b.zeta * b.zeta2 - b.zeta1 * b.zeta1
            assert abs(g.nu[i, j] - direct) <= 1e-6 * abs(direct)

    def test_grid_file_roundtrip(self, tmp_path):
        g = grid_nu((0.0, 1.0, 5.0, 6.0), 0.05)
        path = tmp_path / "field.grid"
        write_grid(g, path)
        g2 = read_grid(path)
        assert g2.shape == g.shape
        assert g2.h == g.h
        assert (g2.sigma_min, g2.sigma_max, g2.t_min, g2.t_max) == \
            (g.sigma_min, g.sigma_max, g.t_min, g.t_max)
        assert np.array_equal(g2.nu, g.nu)

    def test_grid_file_rejects_garbage(self, tmp_path):
        p = tmp_path / "bad.grid"
        p.write_bytes(b"not a grid")
        with pytest.raises(ValueError):
            read_grid(p)

    def test_self_test_diagnostics(self):
        st = self_test(0.01)
        assert st["moment_error"] < 1e-13
        assert st["max_c1"] <= 10.0 / 0.01

    def test_step_guard(self):
        with pytest.raises(OutOfRange):
            grid_nu((0, 1, 5, 6), 0.5)
