"""Numerical re-verification of the zero-free region certificate and the
auxiliary constants used by the zero-counting argument.

The tail integrals have exact closed forms built on
    int_x^inf t^-sigma log^k t dt
      = x^{1-sigma} sum_{j=0}^{k} (k!/(k-j)!) log^{k-j}(x) / (sigma-1)^{j+1},
which assembles into x^{-sigma} (x p(log x) + sum_j q_j/(sigma-1)^j) for the
cubic main term and x^{1/2-sigma} (10 log^2 x + sum_i r_i/(sigma-1/2)^i) for
the error envelope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .coeffs import CoeffTable, cubic_p, summatory
from .errors import CertificateFailed, ConstantViolated, DivergentIntegral
from .nu import csc2_half_pi, nu_raw
from .special import trigamma

LN2 = math.log(2.0)

SIGMA_SAMPLES = (4.25, 5.0, 7.0, 10.0, 20.0)
EQ11_SIGMAS = (4.25, 5.0, 6.0)


def log_power_tail(x: float, sigma: float, k: int) -> float:
    """int_x^inf t^-sigma log^k t dt in closed form (sigma > 1)."""
    if sigma <= 1.0:
        raise DivergentIntegral(f"tail diverges for sigma = {sigma} <= 1")
    L = math.log(x)
    acc = 0.0
    coef = 1.0  # k!/(k-j)!
    for j in range(k + 1):
        acc += coef * L ** (k - j) / (sigma - 1.0) ** (j + 1)
        coef *= k - j
    return x ** (1.0 - sigma) * acc


def q_polynomials(x: float) -> tuple[float, float, float, float]:
    """q_1..q_4 with sigma int_x^inf p(log t) t^-sigma dt
    = x^-sigma (x p(log x) + sum_j q_j/(sigma-1)^j); positive for x >= 4."""
    p = cubic_p()
    L = math.log(x)
    d0 = p(L)
    d1 = 0.5 * L * L + 2.0 * p.c2 * L + p.c1
    d2 = L + 2.0 * p.c2
    d3 = 1.0
    return (x * (d0 + d1), x * (d1 + d2), x * (d2 + d3), x * d3)


def r_polynomials(x: float) -> tuple[float, float, float]:
    """r_1..r_3 with 10 sigma int_x^inf log^2 t t^{-sigma-1/2} dt
    = x^{1/2-sigma} (10 log^2 x + sum_i r_i/(sigma-1/2)^i); positive coefficients."""
    L = math.log(x)
    return (5.0 * L * L + 20.0 * L, 10.0 * L + 10.0, 10.0)


def tail_integrals(x: float, sigma: float) -> tuple[float, float]:
    """(sigma int_x^inf p(log t) t^-sigma dt,
        10 sigma int_x^inf log^2 t t^{-sigma-1/2} dt) in closed form."""
    if x < 4.0:
        raise DivergentIntegral(f"tails need x >= 4, got {x}")
    if sigma <= 1.0:
        raise DivergentIntegral(f"poly tail diverges for sigma = {sigma} <= 1")
    p = cubic_p()
    poly = sigma * (p.c3 * log_power_tail(x, sigma, 3)
                    + p.c2 * log_power_tail(x, sigma, 2)
                    + p.c1 * log_power_tail(x, sigma, 1)
                    + p.c0 * log_power_tail(x, sigma, 0))
    sqrt_t = 10.0 * sigma * log_power_tail(x, sigma + 0.5, 2)
    return poly, sqrt_t


@dataclass
class CertificateReport:
    x: float
    sigma0: float
    ineq1_margin: float
    ineq2_margin: float
    lb_margins: list[tuple[float, float]] = field(default_factory=list)
    margins_by_sigma: list[dict] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return (self.ineq1_margin > 0 and self.ineq2_margin > 0
                and all(m > 0 for _, m in self.lb_margins)
                and all(row["ineq1"] > 0 and row["ineq2"] > 0
                        for row in self.margins_by_sigma))


def _head_sum(table: CoeffTable, x: float, sigma: float) -> float:
    n = np.arange(3, int(math.floor(x)) + 1)
    return float(np.sum(table.a[3: int(math.floor(x)) + 1] / n.astype(float) ** sigma))


def ineq1_margin(table: CoeffTable, x: float, sigma: float) -> float:
    """a(2)/2^sigma - sum_{3<=n<=x} a(n)/n^sigma - 1.5/x^{sigma/2}."""
    a2 = float(table.a[2])
    return a2 / 2.0 ** sigma - _head_sum(table, x, sigma) - 1.5 / x ** (sigma / 2.0)


def ineq2_margin(table: CoeffTable, x: float, sigma: float) -> float:
    """x^{sigma/2} - [x p(log x) + sum q_j/(sigma-1)^j + 10 sqrt(x) log^2 x
    + sqrt(x) sum r_i/(sigma-1/2)^i - A(x)].

    This is x^sigma times the tail comparison A(x)/x^sigma - poly_tail
    - sqrt_tail > -x^{-sigma/2}; the q-sum carries its x factor inside q_j
    (the sqrt(x) printed on it elsewhere contradicts the tail identity).
    """
    L = math.log(x)
    ax = summatory(x, "A", table)
    q = q_polynomials(x)
    r = r_polynomials(x)
    qsum = sum(qj / (sigma - 1.0) ** j for j, qj in enumerate(q, start=1))
    rsum = sum(ri / (sigma - 0.5) ** i for i, ri in enumerate(r, start=1))
    rhs = (x * cubic_p()(L) + qsum + 10.0 * math.sqrt(x) * L * L
           + math.sqrt(x) * rsum - ax)
    return x ** (sigma / 2.0) - rhs


def series_lower_bound(table: CoeffTable, x: float, sigma: float) -> float:
    """Certified lower bound for a(2)/2^sigma - sum_{n>=3} a(n)/n^sigma:
    head terms exactly, the n > x tail through the Lemma-1 envelope
    A(t) <= t p(log t) + 10 sqrt(t) log^2 t under partial summation."""
    a2 = float(table.a[2])
    ax = summatory(x, "A", table)
    poly, sqrt_t = tail_integrals(x, sigma)
    return (a2 / 2.0 ** sigma - _head_sum(table, x, sigma)
            + ax / x ** sigma - (poly + sqrt_t))


def verify_theorem1(table: CoeffTable, x: float = 40.0,
                    sigma0: float = 4.25) -> CertificateReport:
    """Check the two master inequalities at (x, sigma0) and on the sigma
    sample set, plus the consequence bound with constant 0.5."""
    if table.limit < x:
        raise ValueError("table too small for the certificate")
    sigmas = sorted({sigma0, *SIGMA_SAMPLES})
    rows = []
    for s in sigmas:
        rows.append({"sigma": s,
                     "ineq1": ineq1_margin(table, x, s),
                     "ineq2": ineq2_margin(table, x, s)})
    lb = []
    for s in EQ11_SIGMAS:
        margin = series_lower_bound(table, x, s) - 0.5 / 40.0 ** (s / 2.0)
        lb.append((s, margin))
    rep = CertificateReport(
        x=x, sigma0=sigma0,
        ineq1_margin=ineq1_margin(table, x, sigma0),
        ineq2_margin=ineq2_margin(table, x, sigma0),
        lb_margins=lb, margins_by_sigma=rows)
    if not rep.valid:
        bad = [r for r in rows if r["ineq1"] <= 0 or r["ineq2"] <= 0]
        raise CertificateFailed(f"certificate failed at {bad or lb}")
    return rep


# ---------------------------------------------------------------------------
# Constants feeding the zero-counting argument
# ---------------------------------------------------------------------------

EQ13_BOUND = 0.0025
EST1_BOUND = 1.0 / 140.0
EST2_BOUND = 0.0075
QUOTIENT_BOUND = 135.0


def eq13_value(table: CoeffTable) -> float:
    """1 - sum_{n>=3} (a(n)/a(2)) (2/n)^5.

    The printed exponent -5 diverges; the line of integration Re(s) = 5
    forces (2/n)^{+5}, which is what this evaluates.
    """
    n = np.arange(3, table.limit + 1, dtype=np.float64)
    s = float(np.sum(table.a[3:] * (2.0 / n) ** 5)) / float(table.a[2])
    # n > limit tail: a(n) <= log^2(n) tau(n) <= n^0.4 for n >= 1e4, say
    return 1.0 - s


def est1_value(t: float) -> float:
    """|psi'(5 - i t) - (pi/2)^2 csc^2(pi (4 + i t)/2)|."""
    return abs(trigamma(complex(5.0, -t))
               - (math.pi / 2.0) ** 2 * csc2_half_pi(complex(4.0, t)))


def est2_series_bound(table: CoeffTable) -> float:
    """log^2(2)/2^5 - sum_{n>=3} Lambda(n) log(n)/n^5 (head exact, tail tiny)."""
    n = np.arange(3, table.limit + 1, dtype=np.float64)
    lam_tail = float(np.sum(table.lam[3:] * np.log(n) / n ** 5))
    return LN2 * LN2 / 32.0 - lam_tail


@dataclass
class CountingConstantsReport:
    eq13: float
    est1_max: float
    est1_argmax: float
    est2_bound: float
    log2nd_min_sampled: float
    quotient_max_sampled: float
    re_positive_min: float
    product: float

    @property
    def valid(self) -> bool:
        return (self.eq13 > EQ13_BOUND
                and self.est1_max < EST1_BOUND
                and self.est2_bound >= EST2_BOUND
                and self.log2nd_min_sampled >= EST2_BOUND
                and self.quotient_max_sampled < QUOTIENT_BOUND
                and self.re_positive_min > 0.0
                and self.product < 1.0)


def verify_theorem2_constants(table: CoeffTable,
                              t_samples=None) -> CountingConstantsReport:
    """Audit the 0.0025 / (1/140) / 0.0075 / 135 constants numerically."""
    if t_samples is None:
        t_samples = np.concatenate([
            np.linspace(150.0, 1000.0, 60),
            np.geomspace(1000.0, 10000.0, 40),
        ])
    e13 = eq13_value(table)
    e1 = [(est1_value(float(t)), float(t)) for t in t_samples]
    est1_max, est1_argmax = max(e1)
    lmin = math.inf
    qmax = 0.0
    re_min = math.inf
    for t in t_samples:
        s = complex(5.0, -float(t))
        v = nu_raw(s)
        from .special import zeta_derivs  # local import avoids cycle at module load
        z = zeta_derivs(s).zeta
        l2 = abs(v / (z * z))
        lmin = min(lmin, l2)
        q = abs((z * z) / v)
        qmax = max(qmax, q)
        factor = (trigamma(1.0 - complex(-4.0, float(t)))
                  - (math.pi / 2.0) ** 2 * csc2_half_pi(complex(-4.0, float(t))))
        re_min = min(re_min, (1.0 + factor * (z * z) / v).real)
    rep = CountingConstantsReport(
        eq13=e13, est1_max=est1_max, est1_argmax=est1_argmax,
        est2_bound=est2_series_bound(table),
        log2nd_min_sampled=lmin, quotient_max_sampled=qmax,
        re_positive_min=re_min, product=est1_max * QUOTIENT_BOUND)
    if not rep.valid:
        raise ConstantViolated(f"counting constants failed: {rep}")
    return rep


def phi_infimum(x0: float = 5.0, t_max: float = 1000.0, samples: int = 8000) -> float:
    """Desk estimate of A = 2 inf_{Re s = x0} |phi(s)|, phi = (1-2^{1-s})^4 nu(s);
    dense sampling only, reported not proven."""
    best = math.inf
    for t in np.linspace(0.0, t_max, samples):
        s = complex(x0, float(t))
        phi = (1.0 - 2.0 ** (1.0 - s)) ** 4 * nu_raw(s)
        best = min(best, abs(phi))
    return 2.0 * best
