"""Independent reference computations the tests check against.

Everything here deliberately avoids the package's own evaluation paths:
high-precision mpmath summation, brute-force boundary sampling, adaptive
quadrature, and limit definitions.
"""

from __future__ import annotations

import cmath
import math

import mpmath as mp
import numpy as np


def zeta_em_mp(s, N: int = 400, K: int = 30, dps: int = 40):
    """Euler-Maclaurin zeta at elevated precision, written from scratch."""
    with mp.workdps(dps):
        s = mp.mpc(s)
        total = mp.nsum(lambda n: n ** -s, [1, N], method="direct")
        total += N ** (1 - s) / (s - 1) - mp.mpf(0.5) * N ** -s
        poch = mp.mpc(1)
        for k in range(1, K + 1):
            for j in range(2 * k - 3 if k > 1 else 0, 2 * k - 1):
                poch *= s + j
            total += (mp.bernoulli(2 * k) / mp.factorial(2 * k)
                      * poch * N ** (-s - 2 * k + 1))
        return complex(total)


def stieltjes_limit(k: int, m: int = 1 << 20) -> float:
    """C_k from the limit sum_{j<=m} log^k(j)/j - log^{k+1}(m)/(k+1), with
    endpoint corrections and one Richardson step across m and 2m."""

    def corrected(mm: int) -> float:
        j = np.arange(1, mm + 1, dtype=np.float64)
        terms = np.log(j) ** k / j
        s = math.fsum(terms.tolist())
        L = math.log(mm)
        f = L ** k / mm
        fprime = (k * L ** (k - 1) - L ** k) / mm ** 2
        return s - L ** (k + 1) / (k + 1) - 0.5 * f + fprime / 12.0

    h1, h2 = corrected(m), corrected(2 * m)
    return (4.0 * h2 - h1) / 3.0


def dense_winding(rect, f, per_edge: int = 4000) -> int:
    """Non-adaptive argument-principle winding: fixed fine sampling plus
    phase unwrapping. Only for boxes known to be modest in height."""
    a, b, c, d = rect
    corners = [complex(a, c), complex(b, c), complex(b, d), complex(a, d),
               complex(a, c)]
    pts = []
    for z0, z1 in zip(corners[:-1], corners[1:]):
        pts.extend(z0 + (z1 - z0) * i / per_edge for i in range(per_edge))
    pts.append(corners[0])
    args = np.unwrap([cmath.phase(f(z)) for z in pts])
    return int(round((args[-1] - args[0]) / (2 * math.pi)))


def quad_tail_poly(x: float, sigma: float) -> float:
    """sigma * int_x^inf p(log t) t^-sigma dt by adaptive quadrature."""
    from scipy.integrate import quad

    from nuzeta.coeffs import cubic_p
    p = cubic_p()
    val, _ = quad(lambda t: p(math.log(t)) * t ** -sigma, x, np.inf,
                  epsabs=0.0, epsrel=1e-11, limit=400)
    return sigma * val


def quad_tail_sqrt(x: float, sigma: float) -> float:
    """10 sigma * int_x^inf log^2(t) t^{-sigma-1/2} dt by adaptive quadrature."""
    from scipy.integrate import quad
    val, _ = quad(lambda t: math.log(t) ** 2 * t ** (-sigma - 0.5), x, np.inf,
                  epsabs=0.0, epsrel=1e-11, limit=400)
    return 10.0 * sigma * val


def zeta_mp_derivs(s, dps: int = 30):
    """(zeta, zeta', zeta'') straight from mpmath."""
    with mp.workdps(dps):
        z = mp.mpc(s)
        return (complex(mp.zeta(z)), complex(mp.zeta(z, derivative=1)),
                complex(mp.zeta(z, derivative=2)))


def nu_mp(s, dps: int = 30) -> complex:
    z0, z1, z2 = zeta_mp_derivs(s, dps)
    return z0 * z2 - z1 * z1
