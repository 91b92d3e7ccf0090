"""nuzeta: numerics for nu(s) = zeta(s) zeta''(s) - zeta'(s)^2.

Evaluation across the plane, Dirichlet-coefficient tables, argument-principle
zero censuses, zero-free-region certificates, grid differentiation, and the
figure emitters, all behind one CLI (`nuzeta`).
"""

from .coeffs import CoeffTable, build_table, coeff_b, lemma_residual, p_eval, summatory
from .nu import NuValue, fe_residual, log2nd, nu, nu_raw
from .special import ConstantsSet, EvalBundle, constants, log_chi, trigamma, zeta_derivs
from .stencil import StencilScheme, build_stencil, grid_nu
from .zeros import (
    Rectangle,
    ZeroRecord,
    census,
    census_compare,
    count_formula,
    density_count,
    localize,
    predict_first_kind,
    winding,
)

__version__ = "0.1.0"

__all__ = [
    "CoeffTable", "ConstantsSet", "EvalBundle", "NuValue", "Rectangle",
    "StencilScheme", "ZeroRecord", "build_stencil", "build_table", "census",
    "census_compare", "coeff_b", "constants", "count_formula", "density_count",
    "fe_residual", "grid_nu", "lemma_residual", "localize", "log2nd",
    "log_chi", "nu", "nu_raw", "p_eval", "predict_first_kind", "summatory",
    "trigamma", "winding", "zeta_derivs",
]
