"""Complex zeta with two derivatives, Gamma-family functions, and shared constants.

Everything here is double precision (80-bit extended on the strip where the
summation loses digits to cancellation); accuracy is established by
cross-checks, not interval arithmetic.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import (
    BranchTrackingFailure,
    PoleAtNonpositiveInteger,
    PoleAtOne,
    RangeExceeded,
)

LN_PI = math.log(math.pi)
LN_2PI = math.log(2.0 * math.pi)
TWO_PI = 2.0 * math.pi

# Supported height for direct summation; figures in this project stop at 1e4+100.
T_MAX = 2.0e4

# Euler-Maclaurin tuning: number of Bernoulli correction terms.
EM_BERNOULLI_TERMS = 25

# Below this real part the direct sum loses too many digits to cancellation,
# so evaluation goes through the functional equation instead. The threshold
# leaves the whole |Re| <= 5 band on the direct route for identity checks.
REFLECT_BELOW = -5.5

# Direct summation in [REFLECT_BELOW, 0.5) runs in 80-bit arithmetic: the main
# sum grows like N^{-sigma} while zeta itself stays O(t^{1/2-sigma}).
EXTENDED_BELOW = 0.5

EULER_MACLAURIN = "euler_maclaurin"
REFLECTED = "reflected"
STENCIL = "stencil"

# Stieltjes constants C0 (Euler's), C1, C2; validated in tests against the
# limit definition and an independent high-precision oracle.
STIELTJES_C0 = 0.5772156649015328606
STIELTJES_C1 = -0.0728158454836767249
STIELTJES_C2 = -0.0096903631928723184


def as_point(s) -> complex:
    """Validate and coerce a point in the s-plane to a finite complex number."""
    z = complex(s)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite point {s!r}")
    return z


@dataclass(frozen=True)
class EvalBundle:
    """zeta and its first two derivatives at one point, with provenance."""

    zeta: complex
    zeta1: complex
    zeta2: complex
    method: str
    est_abs_err: float


@dataclass(frozen=True)
class ConstantsSet:
    bernoulli: tuple[float, ...]          # B_2, B_4, ..., B_60
    bernoulli_exact: tuple[Fraction, ...]
    stieltjes: tuple[float, float, float]  # C0, C1, C2


@lru_cache(maxsize=1)
def _bernoulli_exact(n_max: int = 60) -> tuple[Fraction, ...]:
    # B_0..B_n via sum_{k<=m} C(m+1,k) B_k = 0, exact rationals.
    b = [Fraction(1)]
    for m in range(1, n_max + 1):
        acc = Fraction(0)
        for k in range(m):
            acc += math.comb(m + 1, k) * b[k]
        b.append(-acc / (m + 1))
    return tuple(b)


@lru_cache(maxsize=1)
def constants() -> ConstantsSet:
    """Bernoulli numbers B_2..B_60 (exact) and the first three Stieltjes constants."""
    exact = _bernoulli_exact(60)
    evens = tuple(exact[2 * k] for k in range(1, 31))
    return ConstantsSet(
        bernoulli=tuple(float(f) for f in evens),
        bernoulli_exact=evens,
        stieltjes=(STIELTJES_C0, STIELTJES_C1, STIELTJES_C2),
    )


def bernoulli_even(k: int) -> float:
    """B_{2k} as a float, k >= 1."""
    return constants().bernoulli[k - 1]


_TRUNCATION_FLOOR_OVERRIDE: int | None = None


def set_truncation_floor(n: int | None) -> None:
    """Override the Euler-Maclaurin main-sum floor (config knob); None resets."""
    global _TRUNCATION_FLOOR_OVERRIDE
    if n is not None and not 30 <= n <= 10 ** 6:
        raise ValueError("truncation floor must be in [30, 1e6]")
    _TRUNCATION_FLOOR_OVERRIDE = n


def em_truncation(t: float, sigma: float = 1.0) -> int:
    """Main-sum length for the Euler-Maclaurin evaluation at height t.

    Left of the strip the floor drops to 30: the correction series still
    converges there, and a shorter main sum loses fewer digits to the
    n^{-sigma} growth of its terms.
    """
    floor = 50 if sigma >= EXTENDED_BELOW else 30
    if _TRUNCATION_FLOOR_OVERRIDE is not None:
        floor = max(floor, _TRUNCATION_FLOOR_OVERRIDE)
    return max(math.ceil(abs(t) / 2) + 20, floor)


@lru_cache(maxsize=4)
def _em_coeffs(dtype_name: str):
    dt = np.dtype(dtype_name)
    c = np.array(
        [float(Fraction(b) / math.factorial(2 * k))
         for k, b in enumerate(constants().bernoulli_exact[:EM_BERNOULLI_TERMS], start=1)],
        dtype=dt,
    )
    return c


def _em_eval(s: np.ndarray, N: int, dtype) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Euler-Maclaurin zeta, zeta', zeta'' for an array of points sharing one N.

    Term-wise differentiated: each n^{-s} contributes -log(n) n^{-s} to zeta'
    and log(n)^2 n^{-s} to zeta''; boundary and Bernoulli terms likewise.
    Returns (z0, z1, z2, est_abs_err).
    """
    s = np.asarray(s, dtype=dtype)
    real_dt = np.float64 if dtype == np.complex128 else np.longdouble
    n = np.arange(1, N + 1, dtype=real_dt)
    ln = np.log(n)
    # (m, N) matrix of n^{-s}
    E = np.exp(-s[:, None] * ln[None, :])
    z0 = E.sum(axis=1)
    z1 = -(E * ln).sum(axis=1)
    z2 = (E * (ln * ln)).sum(axis=1)

    L = np.log(np.asarray(N, dtype=real_dt))
    Nms = E[:, -1]                      # N^{-s}
    inv = 1.0 / (s - 1.0)
    T = N * Nms * inv                   # N^{1-s}/(s-1)
    z0 += T - 0.5 * Nms
    z1 += -T * (L + inv) + 0.5 * L * Nms
    z2 += T * (L * L + 2.0 * L * inv + 2.0 * inv * inv) - 0.5 * L * L * Nms

    # Bernoulli corrections: B_2k/(2k)! * P_k(s) * N^{1-s-2k},
    # P_k(s) = s(s+1)...(s+2k-2); p0/p1/p2 track P, P', P'' incrementally.
    coeffs = _em_coeffs(np.dtype(dtype).name)
    p0 = np.ones_like(s)
    p1 = np.zeros_like(s)
    p2 = np.zeros_like(s)
    scale = N * Nms                     # N^{1-s}; becomes N^{1-s-2k} inside the loop
    last0 = last2 = None
    for k in range(1, EM_BERNOULLI_TERMS + 1):
        lo = 0 if k == 1 else 2 * k - 3
        for j in range(lo, 2 * k - 1):
            f = s + j
            p2 = p2 * f + 2.0 * p1
            p1 = p1 * f + p0
            p0 = p0 * f
        scale = scale / (N * N)
        ck = coeffs[k - 1]
        t0 = ck * p0 * scale
        z0 += t0
        z1 += ck * (p1 - L * p0) * scale
        t2 = ck * (p2 - 2.0 * L * p1 + L * L * p0) * scale
        z2 += t2
        last0, last2 = t0, t2

    est = np.maximum(np.abs(last0), np.abs(last2)).astype(np.float64)
    est = np.maximum(est, 1e-300)
    return (z0.astype(np.complex128), z1.astype(np.complex128),
            z2.astype(np.complex128), est)


def _zeta_direct(s: complex) -> tuple[complex, complex, complex, float]:
    N = em_truncation(s.imag, s.real)
    dtype = np.complex128 if s.real >= EXTENDED_BELOW else np.complex256
    z0, z1, z2, est = _em_eval(np.array([s]), N, dtype)
    return z0[0], z1[0], z2[0], float(est[0])


def zeta_derivs(s, order: int = 2) -> EvalBundle:
    """zeta(s), zeta'(s), zeta''(s) by differentiated Euler-Maclaurin summation.

    Points with Re(s) below the cancellation threshold are routed through the
    functional equation zeta(s) = chi(s) zeta(1-s) with chi-derivatives from
    the log-Gamma family.
    """
    s = as_point(s)
    if order not in (0, 1, 2):
        raise ValueError(f"order must be 0, 1 or 2, got {order}")
    if s == 1:
        raise PoleAtOne("zeta pole at s = 1")
    if abs(s.imag) > T_MAX:
        raise RangeExceeded(f"|Im s| = {abs(s.imag)} exceeds supported {T_MAX}")

    if s.real >= REFLECT_BELOW:
        z0, z1, z2, est = _zeta_direct(s)
        return EvalBundle(z0, z1, z2, EULER_MACLAURIN, est)

    w = 1.0 - s
    y0, y1, y2, est_w = _zeta_direct(w)
    lc = log_chi(s)
    chi = cmath.exp(lc)
    g1 = log_chi_d1(s)
    g2 = log_chi_d2(s)
    z0 = chi * y0
    z1 = chi * (g1 * y0 - y1)
    z2 = chi * ((g1 * g1 + g2) * y0 - 2.0 * g1 * y1 + y2)
    est = max(abs(chi) * est_w, abs(z0) * 1e-14, 1e-300)
    return EvalBundle(z0, z1, z2, REFLECTED, est)


def zeta_derivs_batch(s_values) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized zeta/zeta'/zeta'' over an array of points.

    Groups points by summation length and arithmetic width; reflected points
    are evaluated through their mirror group. Used by the grid evaluator.
    """
    s_arr = np.asarray(s_values, dtype=np.complex128).ravel()
    if np.any(np.abs(s_arr.imag) > T_MAX):
        raise RangeExceeded("batch contains |Im s| beyond supported range")
    if np.any(s_arr == 1.0):
        raise PoleAtOne("batch contains s = 1")
    out0 = np.empty_like(s_arr)
    out1 = np.empty_like(s_arr)
    out2 = np.empty_like(s_arr)

    refl = s_arr.real < REFLECT_BELOW
    work = np.where(refl, 1.0 - s_arr, s_arr)
    ext = work.real < EXTENDED_BELOW
    floors = np.where(ext, 30, 50)
    if _TRUNCATION_FLOOR_OVERRIDE is not None:
        floors = np.maximum(floors, _TRUNCATION_FLOOR_OVERRIDE)
    Ns = np.maximum(np.ceil(np.abs(work.imag) / 2).astype(np.int64) + 20, floors)
    for dtype, dmask in ((np.complex128, ~ext), (np.complex256, ext)):
        for N in np.unique(Ns[dmask]):
            idx = np.flatnonzero(dmask & (Ns == N))
            z0, z1, z2, _ = _em_eval(work[idx], int(N), dtype)
            out0[idx], out1[idx], out2[idx] = z0, z1, z2

    for i in np.flatnonzero(refl):
        s = complex(s_arr[i])
        chi = cmath.exp(log_chi(s))
        g1 = log_chi_d1(s)
        g2 = log_chi_d2(s)
        y0, y1, y2 = out0[i], out1[i], out2[i]
        out0[i] = chi * y0
        out1[i] = chi * (g1 * y0 - y1)
        out2[i] = chi * ((g1 * g1 + g2) * y0 - 2.0 * g1 * y1 + y2)
    shape = np.asarray(s_values, dtype=np.complex128).shape
    return out0.reshape(shape), out1.reshape(shape), out2.reshape(shape)


# ---------------------------------------------------------------------------
# Gamma family: log Gamma, digamma, trigamma by recurrence shift + Stirling
# ---------------------------------------------------------------------------

_LGAMMA_TERMS = 10   # B_2..B_20
_PSI_TERMS = 12      # B_2..B_24
_SHIFT_RE = 10.0


def _check_gamma_pole(z: complex, what: str) -> None:
    if z.imag == 0.0 and z.real <= 0.0 and z.real == int(z.real):
        raise PoleAtNonpositiveInteger(f"{what} pole at {z}")


def log_gamma(z) -> complex:
    """Principal branch of log Gamma via Stirling's series after a recurrence shift."""
    z = as_point(z)
    _check_gamma_pole(z, "log_gamma")
    shift = 0.0 + 0.0j
    while z.real < _SHIFT_RE:
        shift -= cmath.log(z)
        z += 1.0
    zi = 1.0 / z
    zi2 = zi * zi
    acc = 0.0 + 0.0j
    p = zi
    for k in range(1, _LGAMMA_TERMS + 1):
        acc += bernoulli_even(k) / (2 * k * (2 * k - 1)) * p
        p *= zi2
    return (z - 0.5) * cmath.log(z) - z + 0.5 * LN_2PI + acc + shift


def digamma(z) -> complex:
    """psi(z) = Gamma'(z)/Gamma(z)."""
    z = as_point(z)
    _check_gamma_pole(z, "digamma")
    acc = 0.0 + 0.0j
    while z.real < _SHIFT_RE:
        acc -= 1.0 / z
        z += 1.0
    zi = 1.0 / z
    zi2 = zi * zi
    series = 0.0 + 0.0j
    p = zi2
    for k in range(1, _PSI_TERMS + 1):
        series += bernoulli_even(k) / (2 * k) * p
        p *= zi2
    return cmath.log(z) - 0.5 * zi - series + acc


def trigamma(z) -> complex:
    """psi'(z) by the recurrence psi'(z) = psi'(z+1) + 1/z^2, then the
    Bernoulli asymptotic series once Re(z) is large; absolute error <= 1e-12."""
    z = as_point(z)
    _check_gamma_pole(z, "trigamma")
    acc = 0.0 + 0.0j
    while z.real < _SHIFT_RE:
        acc += 1.0 / (z * z)
        z += 1.0
    zi = 1.0 / z
    zi2 = zi * zi
    series = zi + 0.5 * zi2
    p = zi * zi2
    for k in range(1, _PSI_TERMS + 1):
        series += bernoulli_even(k) * p
        p *= zi2
    return series + acc


# ---------------------------------------------------------------------------
# chi(s) of the functional equation zeta(s) = chi(s) zeta(1-s)
# ---------------------------------------------------------------------------


def log_chi(s) -> complex:
    """One branch of log chi(s) from the Gamma-quotient form
    chi(s) = pi^(s-1/2) Gamma((1-s)/2) / Gamma(s/2)."""
    s = as_point(s)
    return (s - 0.5) * LN_PI + log_gamma((1.0 - s) / 2.0) - log_gamma(s / 2.0)


def log_chi_d1(s) -> complex:
    """(log chi)'(s)."""
    s = as_point(s)
    return LN_PI - 0.5 * digamma((1.0 - s) / 2.0) - 0.5 * digamma(s / 2.0)


def log_chi_d2(s) -> complex:
    """(log chi)''(s); equals psi'(1-s) - (pi/2)^2 csc^2(pi s/2) by duplication."""
    s = as_point(s)
    return 0.25 * (trigamma((1.0 - s) / 2.0) - trigamma(s / 2.0))


def log_chi_path(points) -> list[complex]:
    """Continuous branch of log chi along a caller-supplied path.

    Unwraps the imaginary part between consecutive points; fails if the
    argument still jumps by more than pi/2 after unwrapping.
    """
    out: list[complex] = []
    prev = None
    for p in points:
        raw = log_chi(p)
        if prev is None:
            v = raw
        else:
            k = round((prev.imag - raw.imag) / TWO_PI)
            v = complex(raw.real, raw.imag + TWO_PI * k)
            if abs(v.imag - prev.imag) > math.pi / 2:
                raise BranchTrackingFailure(
                    f"argument jump {abs(v.imag - prev.imag):.3f} > pi/2 at {p}"
                )
        out.append(v)
        prev = v
    return out


def chi(s) -> complex:
    """chi(s) itself."""
    return cmath.exp(log_chi(s))
