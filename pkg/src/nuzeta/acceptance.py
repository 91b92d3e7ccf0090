"""The acceptance suite: every quantitative claim re-verified at desk scale,
one pass/fail row per criterion. Shared heavy artifacts (coefficient tables,
the census) are built lazily and reused across rows.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import certificate as cert
from .coeffs import build_table, delta4_p, duality_gap, lemma_residual, p_eval
from .nu import fe_residual, fe_residual_reflected_log2nd
from .render import (
    local_extrema,
    phase_plot,
    resurgence_curve,
    ring_hue_winding,
)
from .stencil import UNIT_OFFSETS, exact_unit_weights, grid_nu
from .zeros import (
    Rectangle,
    census,
    census_compare,
    count_formula,
    density_count,
    localize,
    predict_first_kind,
    winding,
)

GAMMA1_HALF = 7.0673625819


@dataclass
class CheckResult:
    criterion: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.criterion:>2}. {self.name}: {self.detail}"


@dataclass
class Artifacts:
    """Lazily built shared state for the acceptance run."""

    jobs: int = 1
    _table5: object = None
    _table6: object = None
    _census200: list | None = None
    _fk_records: list | None = None
    timings: dict = field(default_factory=dict)

    def table5(self):
        if self._table5 is None:
            t0 = time.time()
            self._table5 = build_table(10 ** 5)
            self.timings["table_1e5"] = time.time() - t0
        return self._table5

    def table6(self):
        if self._table6 is None:
            t0 = time.time()
            self._table6 = build_table(10 ** 6)
            self.timings["table_1e6"] = time.time() - t0
        return self._table6

    def census200(self):
        if self._census200 is None:
            t0 = time.time()
            self._census200 = census(200.0, jobs=self.jobs)
            self.timings["census_200"] = time.time() - t0
        return self._census200

    def first_kind_window(self):
        if self._fk_records is None:
            t0 = time.time()
            preds = predict_first_kind(1e4, 1e4 + 100.0)
            self._fk_records = localize(
                Rectangle(-13.9, -10.7, 1e4, 1e4 + 100.0),
                jobs=self.jobs, predictors=preds)
            self.timings["first_kind_1e4"] = time.time() - t0
        return self._fk_records


def check_1_coefficient_duality(art: Artifacts) -> CheckResult:
    t0 = time.time()
    art.table5()
    gap = duality_gap(10 ** 5)
    elapsed = time.time() - t0 + art.timings.get("table_1e5", 0.0)
    ok = gap <= 1e-9 and elapsed <= 30.0
    return CheckResult(1, "coefficient duality to 1e5",
                       ok, f"max rel gap {gap:.2e}, {elapsed:.1f}s")


def _lemma_points(lo: float, hi: float, n: int) -> np.ndarray:
    # half-integer offsets dodge the n < x boundary convention
    xs = np.geomspace(lo, hi, n)
    return np.minimum(np.floor(xs) + 0.5, hi - 0.5)


def check_2_lemma_constant(art: Artifacts) -> CheckResult:
    tb = art.table6()
    worst = 0.0
    for x in _lemma_points(10.0, 1e6, 200):
        r, bound = lemma_residual(float(x), tb)
        worst = max(worst, abs(r) / bound)
    return CheckResult(2, "Lemma-1 envelope with constant 10",
                       worst <= 1.0, f"worst |residual|/bound = {worst:.4f}")


def check_3_density_exponent(art: Artifacts) -> CheckResult:
    tb = art.table6()
    xs = _lemma_points(100.0, 1e6, 200)
    ratios = []
    for x in xs:
        r, _ = lemma_residual(float(x), tb)
        ratios.append(abs(r) / float(x) ** 0.433)
    imax = int(np.argmax(ratios))
    ok = imax < len(ratios) // 2
    return CheckResult(3, "x^0.433 residual ratio peaks low",
                       ok, f"argmax at point {imax + 1}/{len(ratios)}, "
                           f"max {max(ratios):.3f}")


def check_4_delta4(_: Artifacts) -> CheckResult:
    rng = np.random.default_rng(20240)
    worst = max(abs(delta4_p(float(t))) for t in rng.uniform(0.0, 20.0, 100))
    return CheckResult(4, "Delta^4 p vanishes", worst <= 1e-10,
                       f"max |Delta^4 p| = {worst:.2e}")


def check_5_functional_equation(_: Artifacts) -> CheckResult:
    rng = np.random.default_rng(55)
    worst5 = worst7 = 0.0
    for _i in range(100):
        s = complex(rng.uniform(-5, 5),
                    rng.uniform(5, 100) * rng.choice([-1.0, 1.0]))
        worst5 = max(worst5, fe_residual(s))
        worst7 = max(worst7, fe_residual_reflected_log2nd(s))
    ok = worst5 < 1e-7 and worst7 < 1e-7
    return CheckResult(5, "reflection identity residuals", ok,
                       f"eq(5) worst {worst5:.1e}, eq(7) worst {worst7:.1e}")


def check_6_zero_free_region(art: Artifacts) -> CheckResult:
    tb = art.table5()
    w = winding((4.25, 8.0, 0.5, 100.0))
    rep = cert.verify_theorem1(tb)
    rep2 = cert.verify_theorem2_constants(tb)
    ok = (w == 0 and rep.valid and rep2.valid)
    return CheckResult(
        6, "zero-free region + certificate constants", ok,
        f"winding {w}; ineq margins ({rep.ineq1_margin:.1e}, "
        f"{rep.ineq2_margin:.1f}); lb>{0.5}/40^(s/2) ok; eq13 {rep2.eq13:.3f}; "
        f"est1 {rep2.est1_max:.5f}; est2 {rep2.est2_bound:.5f}; "
        f"quotient {rep2.quotient_max_sampled:.1f}")


def check_7_counting_formula(art: Artifacts) -> CheckResult:
    recs = art.census200()
    elapsed = art.timings["census_200"]
    details = []
    ok = elapsed <= 600.0
    for T in (50.0, 100.0, 200.0):
        n_comp, n_form, resid = census_compare(T, records=recs)
        tol = 3.0 * math.log(T)
        ok = ok and abs(resid) <= tol
        details.append(f"T={T:.0f}: {n_comp} vs {n_form:.1f} (|{resid:.1f}|<={tol:.1f})")
    main_100 = count_formula(100.0)
    ok = ok and abs(main_100 - 34.2) < 0.05
    return CheckResult(7, "counting formula census", ok,
                       "; ".join(details) + f"; census {elapsed:.0f}s")


def _first_kind_stats(art: Artifacts):
    recs = [r for r in art.first_kind_window()
            if r.kind == "trivial_first_kind"
            and 1e4 <= r.location.imag <= 1e4 + 100.0]
    recs.sort(key=lambda r: r.location.imag)
    gaps = [b.location.imag - a.location.imag for a, b in zip(recs[:-1], recs[1:])]
    res = [r.location.real for r in recs]
    return recs, gaps, res


def check_8_first_kind(art: Artifacts) -> CheckResult:
    recs, gaps, res = _first_kind_stats(art)
    count_ok = len(recs) == 11
    gaps_ok = all(abs(g - 9.1) <= 0.3 for g in gaps)
    re_ok = all(abs(x - (-12.2)) <= 0.5 for x in res)
    ok = count_ok and gaps_ok and re_ok
    return CheckResult(
        8, "first-kind zeros in [1e4, 1e4+100]", ok,
        f"count {len(recs)} (want 11); spacings "
        f"[{min(gaps):.2f},{max(gaps):.2f}] (want 9.1+-0.3); Re in "
        f"[{min(res):.2f},{max(res):.2f}] (want -12.2+-0.5)")


def check_9_second_kind(art: Artifacts, jobs: int | None = None) -> CheckResult:
    details = []
    ok = True
    for c in (-2.0, -4.0, -6.0):
        recs = localize(Rectangle(c - 1.6, c + 1.6, -2.2, 2.2),
                        jobs=jobs or art.jobs)
        pair = [r for r in recs if abs(r.location - c) <= 1.5
                and r.location.imag != 0.0]
        has_pair = any(abs(a.location - b.location.conjugate()) < 1e-6
                       for a in pair for b in pair if a is not b)
        ok = ok and has_pair
        nearest = min((abs(r.location - c) for r in recs), default=math.inf)
        details.append(f"{c:+.0f}: nearest pair dist {nearest:.3f}"
                       f" {'ok' if has_pair else 'MISS'}")
    return CheckResult(9, "second-kind pairs within 1.5 of -2,-4,-6",
                       ok, "; ".join(details))


def _exact_stencil_mp(weights, f, s0, h, mp):
    acc = mp.mpc(0)
    for (re, im), d in zip(weights, UNIT_OFFSETS):
        w = (mp.mpf(re.numerator) / re.denominator
             + 1j * mp.mpf(im.numerator) / im.denominator)
        acc += w * f(s0 + mp.mpc(int(d.real), int(d.imag)) * h)
    return acc / h


def check_10_stencil(_: Artifacts) -> CheckResult:
    import mpmath as mp
    mp.mp.dps = 50
    w1, _w2 = exact_unit_weights()
    s0 = mp.mpc(1, 1)
    hs = [mp.mpf("0.02"), mp.mpf("0.01"), mp.mpf("0.005")]
    errs = [float(abs(_exact_stencil_mp(w1, mp.exp, s0, h, mp) - mp.exp(s0)))
            for h in hs]
    slope = float(np.polyfit(np.log([0.02, 0.01, 0.005]), np.log(errs), 1)[0])

    grid = grid_nu((-1.0, 3.0, 20.0, 24.0), 0.04)
    rows, cols = grid.shape
    from .special import zeta_derivs
    rng = np.random.default_rng(3)
    pts = grid.points()
    worst = 0.0
    for _i in range(20):
        i = int(rng.integers(1, rows - 1))
        j = int(rng.integers(1, cols - 1))
        b = zeta_derivs(complex(pts[i, j]))
        direct = b.zeta * b.zeta2 - b.zeta1 * b.zeta1
        worst = max(worst, abs(grid.nu[i, j] - direct) / abs(direct))
    budget = rows * cols + 2 * (rows + cols) - 4   # lattice + boundary ring
    ok = slope >= 7.0 and worst <= 1e-6 and grid.zeta_evals <= budget
    return CheckResult(
        10, "stencil order and grid reuse", ok,
        f"slope {slope:.2f} (>=7); probe rel {worst:.1e} (<=1e-6); "
        f"evals {grid.zeta_evals} <= {budget}")


def check_11_density_growth(art: Artifacts) -> CheckResult:
    recs = [r for r in art.census200() if r.location.real > 5.0 / 6.0 + 0.1]
    counts = {T: density_count(T, 0.1, records=recs) for T in (50.0, 100.0, 200.0)}
    ok = (counts[100.0] <= 2.5 * counts[50.0] + 5
          and counts[200.0] <= 2.5 * counts[100.0] + 5)
    return CheckResult(
        11, "zero-density near-linear growth", ok,
        f"counts {counts[50.0]}/{counts[100.0]}/{counts[200.0]} at T=50/100/200; "
        f"need c(2T) <= 2.5 c(T)+5")


def check_12_figures(art: Artifacts, out_dir=None) -> CheckResult:
    recs200 = art.census200()
    flank = localize(Rectangle(-9.5, -4.001, 0.05, 100.0), jobs=art.jobs)
    fig2_zeros = ([r for r in recs200 if r.location.imag < 99.5] +
                  [r for r in flank if r.location.imag < 99.5])
    img2 = phase_plot((-9.5, 10.5, 0.05, 100.0), 10.0)
    bad2 = [r.location for r in fig2_zeros
            if ring_hue_winding(img2, r.location, radius_px=3) != r.winding]

    chain = localize(Rectangle(-30.0, -1.5, 0.4, 4.6))
    img3 = phase_plot((-30.0, 1.0, 0.05, 5.0), 10.0)
    bad3 = [r.location for r in chain
            if ring_hue_winding(img3, r.location, radius_px=3) != r.winding]

    curve = resurgence_curve(0.5, 50.0, 4000)
    ext = local_extrema(curve)
    nearest = min((abs(t - GAMMA1_HALF) for t, _ in ext), default=math.inf)

    if out_dir is not None:
        from .render import write_ppm, write_resurgence_csv
        from pathlib import Path
        out = Path(out_dir)
        write_ppm(img2, out / "fig2_left.ppm")
        write_ppm(img3, out / "fig3.ppm")
        write_resurgence_csv(curve, out / "fig1.csv")

    ok = not bad2 and not bad3 and nearest <= 0.2
    return CheckResult(
        12, "figure signatures match the census", ok,
        f"fig2-left {len(fig2_zeros) - len(bad2)}/{len(fig2_zeros)} wheels; "
        f"fig3 {len(chain) - len(bad3)}/{len(chain)}; resurgence extremum "
        f"within {nearest:.3f} of {GAMMA1_HALF:.3f}")


ALL_CHECKS = [
    check_1_coefficient_duality,
    check_2_lemma_constant,
    check_3_density_exponent,
    check_4_delta4,
    check_5_functional_equation,
    check_6_zero_free_region,
    check_7_counting_formula,
    check_8_first_kind,
    check_9_second_kind,
    check_10_stencil,
    check_11_density_growth,
    check_12_figures,
]


def run_all(jobs: int = 1, out_dir=None, echo=print) -> list[CheckResult]:
    art = Artifacts(jobs=jobs)
    results = []
    for fn in ALL_CHECKS:
        kwargs = {}
        if fn is check_12_figures:
            kwargs["out_dir"] = out_dir
        res = fn(art, **kwargs)
        results.append(res)
        if echo:
            echo(res.line())
    return results
