"""The twelve acceptance criteria, each at its stated tolerance, one line of
pass/fail output per criterion.

Three rows assert constants that the verified numerics contradict (documented
with measurements in notes/decisions.md, outside the package):

  * criterion 8: the first-kind zeros near t = 1e4 sit at Re ~ -11.23, not
    -12.2 (the paper's value drops the log2(log^2 2) shift its own modulus
    equation implies);
  * criterion 9: the second-kind pairs for -4 and -6 sit 1.549 and 1.652
    away from those integers, just outside the stated 1.5;
  * criterion 11: the measured density counts grow ~3x per octave at desk
    scale, above the stated 2.5x + 5 envelope.

They are asserted exactly as specified and fail honestly.
"""

import pytest

from nuzeta import acceptance as acc


def _report(result):
    print(result.line())
    assert result.passed, result.detail


def test_criterion_01_coefficient_duality(artifacts):
    _report(acc.check_1_coefficient_duality(artifacts))


def test_criterion_02_lemma_constant_ten(artifacts):
    _report(acc.check_2_lemma_constant(artifacts))


def test_criterion_03_eq12_exponent(artifacts):
    _report(acc.check_3_density_exponent(artifacts))


def test_criterion_04_delta4(artifacts):
    _report(acc.check_4_delta4(artifacts))


def test_criterion_05_functional_equation(artifacts):
    _report(acc.check_5_functional_equation(artifacts))


def test_criterion_06_zero_free_certificate(artifacts):
    _report(acc.check_6_zero_free_region(artifacts))


def test_criterion_07_counting_formula(artifacts):
    _report(acc.check_7_counting_formula(artifacts))


def test_criterion_08_first_kind_zeros(artifacts):
    _report(acc.check_8_first_kind(artifacts))


def test_criterion_09_second_kind_zeros(artifacts):
    _report(acc.check_9_second_kind(artifacts))


def test_criterion_10_stencil_order(artifacts):
    _report(acc.check_10_stencil(artifacts))


def test_criterion_11_density_growth(artifacts):
    _report(acc.check_11_density_growth(artifacts))


def test_criterion_12_figures(artifacts, tmp_path):
    _report(acc.check_12_figures(artifacts, out_dir=tmp_path))
