"""Evaluation of nu(s) = zeta(s) zeta''(s) - zeta'(s)^2 across the plane.

Right of the critical line nu comes straight from the summation backend; left
of it the reflected identity
    nu(s) = chi^2(s) (nu(1-s) + (psi'(1-s) - (pi/2)^2 csc^2(pi s/2)) zeta(1-s)^2)
avoids the catastrophic cancellation of the direct product.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import OutsideRegime, PoleAtOne, RangeExceeded
from .special import (
    LN_2PI,
    LN_PI,
    REFLECT_BELOW,
    as_point,
    log_chi,
    log_gamma,
    trigamma,
    zeta_derivs,
    zeta_derivs_batch,
)

LN2 = math.log(2.0)
LN2_SQ = LN2 * LN2

DIRECT = "direct"
REFLECTED_FE = "reflected_fe"
SERIES_TAIL = "series_tail"

# Growth regions of Eq-(6) type: O(1) to the right of the 1-line, t^{1-2 sigma}
# growth to the left of the 0-line.
BOUNDED_RIGHT = "bounded_right"
CRITICAL_STRIP = "critical_strip"
GROWTH_LEFT = "growth_left"

# Method switch sits on the symmetry line of the functional equation so both
# branches stay well-conditioned in the overlap test band.
REFLECT_AT = 0.5


def _use_direct(s: complex) -> bool:
    # near the origin the mirror point 1-s runs into the zeta pole
    return s.real >= REFLECT_AT or abs(s) <= 0.25


def csc2_half_pi(s: complex) -> complex:
    """csc^2(pi s / 2) through exponentials; decays ~ 4 e^{-pi |t|}, never overflows."""
    if s.imag < 0.0:
        return csc2_half_pi(s.conjugate()).conjugate()
    u = cmath.exp(1j * math.pi * s)  # |u| <= 1 in the upper half plane
    d = 1.0 - u
    return -4.0 * u / (d * d)


def sec2_half_pi(s: complex) -> complex:
    """sec^2(pi s / 2), same exponential trick."""
    if s.imag < 0.0:
        return sec2_half_pi(s.conjugate()).conjugate()
    u = cmath.exp(1j * math.pi * s)
    d = 1.0 + u
    return 4.0 * u / (d * d)


def fe_scalar_term(s: complex) -> complex:
    """psi'(1-s) - (pi/2)^2 csc^2(pi s/2): the scalar addend of the reflection
    identity, also equal to (log chi)''(s)."""
    return trigamma(1.0 - s) - (math.pi * math.pi / 4.0) * csc2_half_pi(s)


@dataclass(frozen=True)
class NuValue:
    nu: complex
    log2nd: complex          # (zeta'/zeta)'(s) = nu / zeta^2
    method: str
    region: str


def _region(sigma: float) -> str:
    if sigma > 1.0:
        return BOUNDED_RIGHT
    if sigma < 0.0:
        return GROWTH_LEFT
    return CRITICAL_STRIP


def _at_negative_even(s: complex) -> bool:
    return (s.imag == 0.0 and s.real <= -2.0 and s.real == 2.0 * round(s.real / 2.0))


def _reflected(s: complex) -> tuple[complex, complex]:
    """(nu(s), (zeta'/zeta)'(s)) for Re(s) < 1/2 via the reflection identity.

    The chi^2 csc^2 product is folded into pi^2 (2 pi)^{2s-2} Gamma(1-s)^2
    using the sine form of chi, so the negative even integers (where chi
    vanishes against the cosecant pole) stay finite.
    """
    w = 1.0 - s
    b = zeta_derivs(w)
    nu_w = b.zeta * b.zeta2 - b.zeta1 * b.zeta1
    zw2 = b.zeta * b.zeta
    core = nu_w + trigamma(w) * zw2
    log_b = 2.0 * LN_PI + (2.0 * s - 2.0) * LN_2PI + 2.0 * log_gamma(w)
    b_term = cmath.exp(log_b) * zw2
    if _at_negative_even(s):
        val = -b_term  # chi(s) = 0 exactly kills the first term
        log2nd = complex("inf")
    else:
        val = cmath.exp(2.0 * log_chi(s)) * core - b_term
        # zeta(s)^2 = chi^2 zeta(1-s)^2: the chi^2 factor cancels in nu/zeta^2
        log2nd = (core / zw2 - (math.pi * math.pi / 4.0) * csc2_half_pi(s)
                  if zw2 != 0 else complex("inf"))
    return val, log2nd


def nu_raw(s) -> complex:
    """nu(s) as a bare complex; the fast path for contour sampling."""
    s = as_point(s)
    if s == 1.0:
        raise PoleAtOne("nu inherits the zeta pole at s = 1")
    if _use_direct(s):
        b = zeta_derivs(s)
        return b.zeta * b.zeta2 - b.zeta1 * b.zeta1
    return _reflected(s)[0]


def nu_raw_batch(points) -> np.ndarray:
    """Vectorized nu over an array of points; the summation work is batched,
    the per-point reflection factors stay scalar (they are cheap)."""
    pts = np.asarray(points, dtype=np.complex128)
    s = pts.ravel()
    if np.any(s == 1.0):
        raise PoleAtOne("batch contains s = 1")
    out = np.empty_like(s)
    direct = (s.real >= REFLECT_AT) | (np.abs(s) <= 0.25)
    if direct.any():
        z0, z1, z2 = zeta_derivs_batch(s[direct])
        out[direct] = z0 * z2 - z1 * z1
    idx = np.flatnonzero(~direct)
    if idx.size:
        w = 1.0 - s[idx]
        z0, z1, z2 = zeta_derivs_batch(w)
        for j, i in enumerate(idx):
            ss = complex(s[i])
            ww = complex(w[j])
            nu_w = z0[j] * z2[j] - z1[j] * z1[j]
            zw2 = z0[j] * z0[j]
            core = nu_w + trigamma(ww) * zw2
            log_b = 2.0 * LN_PI + (2.0 * ss - 2.0) * LN_2PI + 2.0 * log_gamma(ww)
            b_term = cmath.exp(log_b) * zw2
            if _at_negative_even(ss):
                out[i] = -b_term
            else:
                out[i] = cmath.exp(2.0 * log_chi(ss)) * core - b_term
    return out.reshape(pts.shape)


nu_raw.batch = nu_raw_batch


def nu(s) -> NuValue:
    """nu(s) with the second log-derivative and evaluation provenance."""
    s = as_point(s)
    if s == 1.0:
        raise PoleAtOne("nu inherits the zeta pole at s = 1")
    if _use_direct(s):
        b = zeta_derivs(s)
        val = b.zeta * b.zeta2 - b.zeta1 * b.zeta1
        z2 = b.zeta * b.zeta
        log2nd = val / z2 if z2 != 0 else complex("inf")
        return NuValue(val, log2nd, DIRECT, _region(s.real))
    val, log2nd = _reflected(s)
    return NuValue(val, log2nd, REFLECTED_FE, _region(s.real))


def log2nd(s) -> complex:
    """(zeta'/zeta)'(s), i.e. the second derivative of log zeta."""
    return nu(s).log2nd


def _direct_nu(s: complex) -> tuple[complex, complex]:
    b = zeta_derivs(s)
    return b.zeta * b.zeta2 - b.zeta1 * b.zeta1, b.zeta


def fe_residual(s) -> float:
    """Relative residual of the reflection identity with both sides evaluated
    by the direct route: |LHS - RHS| / (|LHS| + |RHS|)."""
    s = as_point(s)
    w = 1.0 - s
    for p in (s, w):
        if p == 1.0:
            raise PoleAtOne("identity undefined at the pole")
        if p.real < REFLECT_BELOW:
            raise RangeExceeded(
                f"Re = {p.real} is below the direct-summation range {REFLECT_BELOW}"
            )
    lhs, _ = _direct_nu(s)
    nu_w, zeta_w = _direct_nu(w)
    rhs = cmath.exp(2.0 * log_chi(s)) * (nu_w + fe_scalar_term(s) * zeta_w * zeta_w)
    return abs(lhs - rhs) / (abs(lhs) + abs(rhs))


def fe_residual_reflected_log2nd(s) -> float:
    """Relative residual of the companion scalar identity
    (zeta'/zeta)'(1-s) = -(pi^2/4) sec^2(pi s/2) + psi'(s) + (zeta'/zeta)'(s),
    both log-derivatives by the direct route."""
    s = as_point(s)
    w = 1.0 - s
    for p in (s, w):
        if p == 1.0:
            raise PoleAtOne("identity undefined at the pole")
        if p.real < REFLECT_BELOW:
            raise RangeExceeded(
                f"Re = {p.real} is below the direct-summation range {REFLECT_BELOW}"
            )
    nu_w, zeta_w = _direct_nu(w)
    lhs = nu_w / (zeta_w * zeta_w)
    nu_s, zeta_s = _direct_nu(s)
    rhs = (-(math.pi * math.pi / 4.0) * sec2_half_pi(s) + trigamma(s)
           + nu_s / (zeta_s * zeta_s))
    return abs(lhs - rhs) / (abs(lhs) + abs(rhs))


# Regime labels for the two-term asymptotic of (zeta'/zeta)'(1-s).
REGIME_GEOMETRIC = "geometric"     # log(2)^2 / 2^s dominates
REGIME_RECIPROCAL = "reciprocal"   # 1/s dominates (|s|^2 < 2^sigma)

_ASYMPTOTIC_EPS = 0.1


@dataclass(frozen=True)
class ReflectedAsymptotic:
    value: complex          # log(2)^2/2^s + 1/s
    geometric_term: complex
    reciprocal_term: complex
    regime: str


def log2nd_asymptotic(s) -> ReflectedAsymptotic:
    """Two-regime approximation of (zeta'/zeta)'(1-s) for Re(s) > 1."""
    s = as_point(s)
    if s.real <= 1.0 + _ASYMPTOTIC_EPS:
        raise OutsideRegime(f"needs Re(s) > {1.0 + _ASYMPTOTIC_EPS}, got {s.real}")
    geo = LN2_SQ * cmath.exp(-s * LN2)
    rec = 1.0 / s
    regime = REGIME_RECIPROCAL if abs(s) ** 2 < 2.0 ** s.real else REGIME_GEOMETRIC
    return ReflectedAsymptotic(geo + rec, geo, rec, regime)
