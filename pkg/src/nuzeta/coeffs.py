"""Dirichlet-series side: sieved coefficients of nu(s), summatory functions,
and the explicit cubic main term of A(x).

a(n) is built by two independent closed forms and the table refuses to exist
if they disagree anywhere:
    divisor form     a(n) = sum_{d|n} (log(d)^2 - log(d) log(n/d))
    convolution form a(n) = sum_{d|n} Lambda(d) log(d) tau(n/d)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import FormulaMismatch, OutOfRange
from .special import STIELTJES_C0, STIELTJES_C1, STIELTJES_C2

LN2 = math.log(2.0)

# Largest table the slice-sieve implementation handles comfortably in memory.
TABLE_LIMIT = 10 ** 8

_DUALITY_RTOL = 1e-9


@dataclass(frozen=True)
class CoeffTable:
    """Sieved arrays up to n = limit, indexable by n directly (index 0 unused)."""

    limit: int
    lam: np.ndarray    # Lambda(n)
    tau: np.ndarray    # divisor counts
    a: np.ndarray      # coefficients of nu(s), convolution-form values
    b: np.ndarray      # coefficients of (1 - 2^{1-s})^4 nu(s)
    a_prefix: np.ndarray  # a_prefix[k] = sum_{n <= k} a(n)
    b_prefix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "lam", _readonly(self.lam))
        object.__setattr__(self, "tau", _readonly(self.tau))
        object.__setattr__(self, "a", _readonly(self.a))
        object.__setattr__(self, "b", _readonly(self.b))
        object.__setattr__(self, "a_prefix", _readonly(self.a_prefix))
        object.__setattr__(self, "b_prefix", _readonly(self.b_prefix))


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


def sieve_primes(limit: int) -> np.ndarray:
    is_p = np.ones(limit + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_p[p]:
            is_p[p * p:: p] = False
    return np.flatnonzero(is_p)


def duality_gap(table_or_limit) -> float:
    """Largest relative disagreement between the divisor and convolution forms
    of a(n); recomputed from scratch, not read off the table."""
    limit = getattr(table_or_limit, "limit", table_or_limit)
    a_div, a_conv, _, _ = _coefficient_forms(int(limit))
    scale = 1.0 + np.abs(a_conv)
    return float(np.max(np.abs(a_div - a_conv) / scale))


def _coefficient_forms(limit: int):
    """(a_divisor_form, a_convolution_form, lam, tau) up to n = limit."""
    n = limit
    ln = np.zeros(n + 1)
    ln[1:] = np.log(np.arange(1, n + 1, dtype=np.float64))

    # tau and the log-moment divisor sums S1 = sum_{d|n} log d,
    # S2 = sum_{d|n} log^2 d, in one pass of slice adds over d.
    tau = np.zeros(n + 1, dtype=np.int64)
    s1 = np.zeros(n + 1)
    s2 = np.zeros(n + 1)
    for d in range(1, n + 1):
        tau[d::d] += 1
        if d > 1:
            s1[d::d] += ln[d]
            s2[d::d] += ln[d] * ln[d]

    # Divisor form: log^2 d - log d log(n/d) summed over d|n collapses to
    # 2 S2(n) - log(n) S1(n).
    a_div = 2.0 * s2 - ln * s1
    a_div[0] = 0.0

    lam = np.zeros(n + 1)
    primes = sieve_primes(n)
    for p in primes:
        lp = math.log(p)
        q = p
        while q <= n:
            lam[q] = lp
            q *= p

    # Convolution form: one slice add per prime power q, weight Lambda(q) log q.
    a_conv = np.zeros(n + 1)
    for p in primes:
        lp = math.log(p)
        q = p
        while q <= n:
            a_conv[q::q] += (lp * math.log(q)) * tau[1: n // q + 1]
            q *= p
    return a_div, a_conv, lam, tau


def build_table(limit: int) -> CoeffTable:
    """Sieve Lambda, tau, a (both formulas), b up to n = limit."""
    if not (2 <= limit <= TABLE_LIMIT):
        raise OutOfRange(f"limit must be in [2, {TABLE_LIMIT}], got {limit}")
    n = limit
    a_div, a_conv, lam, tau = _coefficient_forms(n)

    scale = 1.0 + np.abs(a_conv)
    bad = np.abs(a_div - a_conv) > _DUALITY_RTOL * scale
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise FormulaMismatch(i, float(a_div[i]), float(a_conv[i]))

    b = a_conv.copy()
    for m in range(1, 5):
        step = 1 << m
        idx = np.arange(step, n + 1, step)
        b[idx] += math.comb(4, m) * (-2.0) ** m * a_conv[idx >> m]

    a_prefix = np.cumsum(a_conv)
    b_prefix = np.cumsum(b)
    return CoeffTable(limit=n, lam=lam, tau=tau, a=a_conv, b=b,
                      a_prefix=a_prefix, b_prefix=b_prefix)


def coeff_a(n: int, table: CoeffTable) -> float:
    if not 1 <= n <= table.limit:
        raise OutOfRange(f"n = {n} outside table limit {table.limit}")
    return float(table.a[n])


def coeff_b(n: int, table: CoeffTable) -> float:
    """b(n) = sum_{m <= min(4, v2(n))} C(4,m) (-2)^m a(n / 2^m)."""
    if not 1 <= n <= table.limit:
        raise OutOfRange(f"n = {n} outside table limit {table.limit}")
    return float(table.b[n])


def summatory(x: float, which: str, table: CoeffTable) -> float:
    """A(x) = sum_{n < x} a(n)  (strict), or B(x) = sum_{n <= x} b(n)."""
    if x > table.limit + 1:
        raise OutOfRange(f"x = {x} beyond table limit {table.limit}")
    if which == "A":
        top = math.ceil(x) - 1 if float(x).is_integer() else math.floor(x)
        pref = table.a_prefix
    elif which == "B":
        top = math.floor(x)
        pref = table.b_prefix
    else:
        raise ValueError(f"which must be 'A' or 'B', got {which!r}")
    top = min(top, table.limit)
    if top < 1:
        return 0.0
    return float(pref[top])


# ---------------------------------------------------------------------------
# The explicit cubic p(t): x * p(log x) is the main term of A(x)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CubicP:
    c3: float
    c2: float
    c1: float
    c0: float

    def __call__(self, t: float) -> float:
        return ((self.c3 * t + self.c2) * t + self.c1) * t + self.c0

    def coefficients(self) -> tuple[float, float, float, float]:
        return (self.c3, self.c2, self.c1, self.c0)


@lru_cache(maxsize=1)
def cubic_p() -> CubicP:
    """p(t) = t^3/6 + (C0 - 1/2) t^2 + (1 - 4C1 - 2C0) t + 4C2 + 4C1 + 2C0 - 1."""
    c0, c1, c2 = STIELTJES_C0, STIELTJES_C1, STIELTJES_C2
    return CubicP(
        c3=1.0 / 6.0,
        c2=c0 - 0.5,
        c1=1.0 - 4.0 * c1 - 2.0 * c0,
        c0=4.0 * c2 + 4.0 * c1 + 2.0 * c0 - 1.0,
    )


def p_eval(t: float) -> float:
    return cubic_p()(t)


def delta4_p(t: float) -> float:
    """Fourth difference of p under the shift t -> t - log 2; identically zero
    since p has degree three. Evaluated in 80-bit arithmetic so that the
    returned value reflects the cancellation, not float64 noise in p."""
    c3, c2, c1, c0 = (np.longdouble(c) for c in cubic_p().coefficients())
    ln2 = np.log(np.longdouble(2.0))
    acc = np.longdouble(0.0)
    for m in range(5):
        u = np.longdouble(t) - m * ln2
        acc += math.comb(4, m) * (-1) ** m * (((c3 * u + c2) * u + c1) * u + c0)
    return float(acc)


def delta4_check(samples=None) -> float:
    """max |Delta^4 p| over a sample set (default: 0..20 plus decades)."""
    if samples is None:
        samples = list(np.linspace(0.0, 20.0, 81)) + [1.0, 10.0, 100.0]
    return max(abs(delta4_p(float(t))) for t in samples)


def lemma_residual(x: float, table: CoeffTable) -> tuple[float, float]:
    """(A(x) - x p(log x), 10 sqrt(x) log(x)^2): the summatory error and the
    explicit constant-10 envelope it is asserted to stay under."""
    if not 4.0 <= x <= table.limit + 1:
        raise OutOfRange(f"x = {x} outside [4, {table.limit}]")
    ax = summatory(x, "A", table)
    residual = ax - x * p_eval(math.log(x))
    bound = 10.0 * math.sqrt(x) * math.log(x) ** 2
    return residual, bound
