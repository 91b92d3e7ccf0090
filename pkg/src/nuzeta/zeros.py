"""Locating, classifying and counting zeros of nu by the argument principle.

Winding numbers come from adaptive boundary sampling (every accepted step
turns the argument by less than pi/2); boxes are quadrisected until each
holds a single zero, which Newton then polishes using the 9-point stencil
derivative of nu itself.
"""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    BoundaryTooClose,
    MaxDepthExceeded,
    SamplingNotConverged,
)
from .nu import nu_raw
from .stencil import cached_stencil

LN2 = math.log(2.0)
TWO_PI = 2.0 * math.pi

NONTRIVIAL = "nontrivial"
FIRST_KIND = "trivial_first_kind"
SECOND_KIND = "trivial_second_kind"
MULTIPLE_SUSPECT = "zeta_multiple_suspect"

# A located zero is tied to a first-kind predictor point when it sits within
# this radius of it (measured prediction error is ~1.1, from the crude
# sigma = log2(t) the predictor uses).
CLASSIFY_RADIUS = 1.5

# The second-kind chain sits at -2k - (0.85..0.99) + (1.0..2.1) i for the
# desk-scale range (measured out to -30), so the gate is: left of the strip,
# low height, within this radius of a negative even integer.
SECOND_KIND_RADIUS = 2.5
SECOND_KIND_IM_MAX = 5.0
SECOND_KIND_RE_MAX = -1.5

# nu has a fourth-order pole at s = 1 and no zeros anywhere near it; boxes
# inside this radius are discarded rather than sampled.
POLE_CLEARANCE = 0.02

# Census rectangle: right edge just inside the certified zero-free region,
# bottom edge just above the real axis (the N_nu definition wants Im > 0).
CENSUS_SIGMA_MIN = -4.0
CENSUS_SIGMA_MAX = 4.3
CENSUS_T_MIN = 0.05


@dataclass(frozen=True)
class Rectangle:
    sigma_min: float
    sigma_max: float
    t_min: float
    t_max: float

    def __post_init__(self):
        if not (self.sigma_min < self.sigma_max and self.t_min < self.t_max):
            raise ValueError(f"empty rectangle {self}")

    @property
    def width(self) -> float:
        return self.sigma_max - self.sigma_min

    @property
    def height(self) -> float:
        return self.t_max - self.t_min

    @property
    def diameter(self) -> float:
        return math.hypot(self.width, self.height)

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.sigma_min + self.sigma_max),
                       0.5 * (self.t_min + self.t_max))

    def corners(self) -> list[complex]:
        return [complex(self.sigma_min, self.t_min),
                complex(self.sigma_max, self.t_min),
                complex(self.sigma_max, self.t_max),
                complex(self.sigma_min, self.t_max)]

    def contains(self, z: complex, pad: float = 0.0) -> bool:
        return (self.sigma_min - pad <= z.real <= self.sigma_max + pad
                and self.t_min - pad <= z.imag <= self.t_max + pad)

    def expanded(self, d: float) -> "Rectangle":
        return Rectangle(self.sigma_min - d, self.sigma_max + d,
                         self.t_min - d, self.t_max + d)


@dataclass(frozen=True)
class ZeroRecord:
    location: complex
    kind: str
    winding: int
    newton_residual: float
    local_scale: float
    predicted_from: int | None = None


def _rect(rect) -> Rectangle:
    if isinstance(rect, Rectangle):
        return rect
    a, b, c, d = rect
    return Rectangle(float(a), float(b), float(c), float(d))


# ---------------------------------------------------------------------------
# Winding number by adaptive boundary sampling
# ---------------------------------------------------------------------------

_REFINE_DEPTH = 46          # halving floor: ~1e-14 of the edge length
_TINY = 1e-280


def _eval_many(f, pts: list[complex]) -> list[complex]:
    bf = getattr(f, "batch", None)
    if bf is not None and len(pts) > 4:
        return list(bf(np.array(pts, dtype=np.complex128)))
    return [f(z) for z in pts]


def _arg_rate_cap(rect: Rectangle) -> float:
    """Step bound keeping the true argument change per step around pi/3:
    the phase of nu rotates at ~ 2 log(t/2pi) per unit along tall edges, and
    aliasing past 2 pi would silently corrupt the principal-value winding."""
    t_abs = max(abs(rect.t_min), abs(rect.t_max), 1.0)
    rate = 2.0 * (max(0.0, math.log(t_abs / TWO_PI)) + 2.0)
    return (math.pi / 3.0) / rate


def _winding_once(rect: Rectangle, f) -> int:
    corners = rect.corners() + [complex(rect.sigma_min, rect.t_min)]
    step = min(max(0.05, (2.0 * (rect.width + rect.height)) / 400.0),
               _arg_rate_cap(rect))
    pts: list[complex] = []
    for a, b in zip(corners[:-1], corners[1:]):
        length = abs(b - a)
        direction = (b - a) / length
        pts.append(a)
        done = 0.0
        while True:
            z = a + direction * done
            # the 4th-order pole at s = 1 spins the phase 4x faster close by
            h = min(step, max(0.01, 0.3 * abs(z - 1.0)))
            done += h
            if done >= length - 1e-12:
                break
            pts.append(a + direction * done)
    pts.append(corners[0])
    vals = _eval_many(f, pts)
    if any(abs(v) < _TINY for v in vals):
        raise SamplingNotConverged("zero of f lies on the contour")

    # refine in waves: every accepted step must turn the argument < pi/2
    total = 0.0
    segs = [(pts[i], vals[i], pts[i + 1], vals[i + 1], 0)
            for i in range(len(pts) - 1)]
    while segs:
        keep: list[tuple] = []
        for z0, v0, z1, v1, depth in segs:
            d = cmath.phase(v1 / v0)
            if abs(d) < math.pi / 2:
                total += d
            else:
                if depth >= _REFINE_DEPTH:
                    raise SamplingNotConverged(f"argument not settling near {z0}")
                keep.append((z0, v0, z1, v1, depth))
        if not keep:
            break
        mids = [0.5 * (s[0] + s[2]) for s in keep]
        vm = _eval_many(f, mids)
        segs = []
        for (z0, v0, z1, v1, depth), zm, vmid in zip(keep, mids, vm):
            if abs(vmid) < _TINY:
                raise SamplingNotConverged(f"|f| ~ 0 on the contour at {zm}")
            segs.append((z0, v0, zm, vmid, depth + 1))
            segs.append((zm, vmid, z1, v1, depth + 1))
    w = total / TWO_PI
    if abs(w - round(w)) > 0.25:
        raise SamplingNotConverged(f"non-integer winding {w:.3f} on {rect}")
    return int(round(w))


def winding(rect, f=nu_raw, perturb_attempts: int = 5) -> int:
    """(1/2 pi) * total argument increment of f around the rectangle boundary.

    A zero (near-)on the contour triggers an outward perturbation of the
    boundary, at most `perturb_attempts` times.
    """
    r = _rect(rect)
    bump = max(1e-4, 2e-3 * min(r.width, r.height))
    for attempt in range(perturb_attempts + 1):
        try:
            return _winding_once(r, f)
        except SamplingNotConverged:
            if attempt == perturb_attempts:
                raise BoundaryTooClose(
                    f"could not move the contour of {rect} off a zero"
                ) from None
            r = r.expanded(bump * (attempt + 1))
    raise AssertionError("unreachable")


# ---------------------------------------------------------------------------
# Newton refinement with the stencil derivative of nu itself
# ---------------------------------------------------------------------------

_NEWTON_H = 1e-3
_SCALE_H = 0.05


def _nu_stencil_d1(z: complex, h: float = _NEWTON_H) -> complex:
    sch = cached_stencil(h)
    vals = _eval_many(nu_raw, [z + d for d in sch.offsets])
    return sum(c * v for c, v in zip(sch.c1, vals))


def local_scale(z: complex, h: float = _SCALE_H) -> float:
    """Magnitude of nu on a small ring around z; the yardstick that makes
    'residual is small' meaningful next to the huge chi^2 growth."""
    sch = cached_stencil(h)
    vals = _eval_many(nu_raw, [z + d for d in sch.offsets[1:]])
    return max(abs(v) for v in vals)


def newton_refine(z0: complex, max_iter: int = 40,
                  step_tol: float = 5e-14) -> tuple[complex, float, bool]:
    """Newton iteration on nu from z0. Returns (z, |nu(z)|, converged)."""
    z = z0
    for _ in range(max_iter):
        v = nu_raw(z)
        d = _nu_stencil_d1(z)
        if d == 0:
            return z, abs(v), False
        step = -v / d
        z += step
        if abs(step) < step_tol * (1.0 + abs(z)):
            return z, abs(nu_raw(z)), True
    return z, abs(nu_raw(z)), False


# ---------------------------------------------------------------------------
# Recursive localization
# ---------------------------------------------------------------------------

_CUT_NUDGES = (0.0, 0.07, -0.07, 0.13, -0.13, 0.21)
_DIAM_FLOOR = 1e-3
_MAX_DEPTH = 64


def _quadrisect(rect: Rectangle, f) -> tuple[list[tuple[Rectangle, int]], int]:
    """Split into four children whose windings sum to the parent's; nudges the
    cuts when a zero sits on one."""
    parent = winding(rect, f)
    if parent == 0:
        return [], 0
    for nudge in _CUT_NUDGES:
        cs = rect.sigma_min + rect.width * (0.5 + nudge)
        ct = rect.t_min + rect.height * (0.5 + nudge)
        kids = [Rectangle(rect.sigma_min, cs, rect.t_min, ct),
                Rectangle(cs, rect.sigma_max, rect.t_min, ct),
                Rectangle(rect.sigma_min, cs, ct, rect.t_max),
                Rectangle(cs, rect.sigma_max, ct, rect.t_max)]
        try:
            ws = [winding(k, f, perturb_attempts=0) for k in kids]
        except (SamplingNotConverged, BoundaryTooClose):
            continue
        if sum(ws) == parent:
            return [(k, w) for k, w in zip(kids, ws) if w != 0], parent
    raise BoundaryTooClose(f"exhausted cut nudges splitting {rect}")


def _near_pole(rect: Rectangle) -> bool:
    dx = max(rect.sigma_min - 1.0, 0.0, 1.0 - rect.sigma_max)
    dy = max(rect.t_min, 0.0, -rect.t_max)
    return math.hypot(dx, dy) < POLE_CLEARANCE


def _localize_serial(rect: Rectangle, diam_floor: float, f) -> list[ZeroRecord]:
    out: list[ZeroRecord] = []
    # boxes overlapping the pole neighbourhood are split blind (no winding);
    # slivers inside the cleared disk hold no zeros and are dropped.
    stack: list[tuple[Rectangle, int | None, int]] = [(rect, None, 0)]
    while stack:
        box, w, depth = stack.pop()
        if _near_pole(box):
            if box.diameter <= POLE_CLEARANCE:
                continue
            cs, ct = box.center.real, box.center.imag
            stack.extend((k, None, depth + 1) for k in (
                Rectangle(box.sigma_min, cs, box.t_min, ct),
                Rectangle(cs, box.sigma_max, box.t_min, ct),
                Rectangle(box.sigma_min, cs, ct, box.t_max),
                Rectangle(cs, box.sigma_max, ct, box.t_max)))
            continue
        if w is None:
            w = winding(box, f)
        if w == 0:
            continue
        if depth > _MAX_DEPTH:
            raise MaxDepthExceeded(box, w)
        if box.diameter >= diam_floor or w > 1:
            if box.diameter < diam_floor * 2 ** -8 and w > 1:
                # a genuine cluster / multiple zero: record the suspect
                out.append(ZeroRecord(box.center, MULTIPLE_SUSPECT, w,
                                      abs(f(box.center)), local_scale(box.center)))
                continue
            kids, _ = _quadrisect(box, f)
            stack.extend((k, kw, depth + 1) for k, kw in kids)
            continue
        z, resid, ok = newton_refine(box.center)
        if not ok or not box.contains(z, pad=2.0 * box.diameter):
            kids, _ = _quadrisect(box, f)
            stack.extend((k, kw, depth + 1) for k, kw in kids)
            continue
        out.append(ZeroRecord(z, NONTRIVIAL, w, resid, local_scale(z)))
    return out


def _pool_worker(args) -> list[ZeroRecord]:
    box, floor = args
    return _localize_serial(box, floor, nu_raw)


def localize(rect, diam_floor: float = _DIAM_FLOOR, jobs: int = 1,
             f=nu_raw, predictors: list | None = None) -> list[ZeroRecord]:
    """All zeros of f (default nu) inside the rectangle, Newton-refined and
    classified. Quadrisection runs until each box holds winding <= 1 and has
    shrunk to `diam_floor`, then Newton takes over."""
    r = _rect(rect)
    if jobs > 1:
        pend = [(r, None)]
        leaves: list[tuple[Rectangle, int | None]] = []
        while pend and len(pend) + len(leaves) < 4 * jobs:
            box, w = pend.pop(0)
            if _near_pole(box) or (w is None and box.diameter > diam_floor):
                try:
                    kids, _ = _quadrisect(box, f) if not _near_pole(box) else (None, 0)
                except (BoundaryTooClose, SamplingNotConverged):
                    leaves.append((box, w))
                    continue
                if kids is None:
                    leaves.append((box, w))
                else:
                    pend.extend(kids)
            else:
                leaves.append((box, w))
        leaves.extend(pend)
        work = [(box, diam_floor) for box, _ in leaves]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_pool_worker, work))
        records = [rec for chunk in chunks for rec in chunk]
    else:
        records = _localize_serial(r, diam_floor, f)
    records.sort(key=lambda rec: (rec.location.imag, rec.location.real))
    return [classify(rec, predictors) for rec in records]


# ---------------------------------------------------------------------------
# Classification and the first-kind predictor
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FirstKindPrediction:
    n: int
    t: float
    sigma: float      # strip coordinate: the zero is predicted at 1 - sigma + i t

    @property
    def location(self) -> complex:
        return complex(1.0 - self.sigma, self.t)


def predict_first_kind(t_lo: float, t_hi: float) -> list[FirstKindPrediction]:
    """Seeds t = (2 pi n + 3 pi/2)/log 2, one Newton step on
    cot(t log 2) = sigma(t)/t with sigma(t) = log(t)/log 2."""
    if t_lo < 20.0:
        raise ValueError("predictor needs t_lo >= 20")
    out = []
    n_lo = math.ceil((t_lo * LN2 - 1.5 * math.pi) / TWO_PI)
    n_hi = math.floor((t_hi * LN2 - 1.5 * math.pi) / TWO_PI)
    for n in range(n_lo, n_hi + 1):
        t0 = (TWO_PI * n + 1.5 * math.pi) / LN2
        sig = math.log(t0) / LN2
        # h(t) = cot(t ln2) - sigma(t)/t; cot vanishes at the seed
        h0 = -sig / t0
        dh = -LN2 - (1.0 / LN2 - sig) / (t0 * t0)
        t1 = t0 - h0 / dh
        sig1 = math.log(t1) / LN2
        if t_lo <= t1 <= t_hi:
            out.append(FirstKindPrediction(n=n, t=t1, sigma=sig1))
    return out


def classify(rec: ZeroRecord, predictors: list | None = None) -> ZeroRecord:
    """Attach the trivial-kind label: first kind if within reach of a
    predictor point, second kind if near a negative even integer."""
    if rec.kind == MULTIPLE_SUSPECT:
        return rec
    z = rec.location
    zu = complex(z.real, abs(z.imag))
    if predictors is None and zu.imag >= 25.0:
        predictors = predict_first_kind(max(zu.imag - 10.0, 20.0), zu.imag + 10.0)
    best = None
    for p in predictors or []:
        d = abs(zu - p.location)
        if d <= CLASSIFY_RADIUS and (best is None or d < best[0]):
            best = (d, p.n)
    if best is not None:
        return replace(rec, kind=FIRST_KIND, predicted_from=best[1])
    if z.real <= SECOND_KIND_RE_MAX and abs(z.imag) <= SECOND_KIND_IM_MAX:
        near_even = round(z.real / 2.0) * 2.0
        if near_even <= -2.0 and abs(z - near_even) <= SECOND_KIND_RADIUS:
            return replace(rec, kind=SECOND_KIND)
    return replace(rec, kind=NONTRIVIAL)


# ---------------------------------------------------------------------------
# Counting formula and censuses
# ---------------------------------------------------------------------------


def count_formula(T: float) -> float:
    """Main term 2(T/2pi log(T/2pi) - T/2pi) - (log 2/pi) T of the zero count."""
    x = T / TWO_PI
    return 2.0 * (x * math.log(x) - x) - (LN2 / math.pi) * T


def census(T: float, jobs: int = 1, diam_floor: float = _DIAM_FLOOR) -> list[ZeroRecord]:
    """All zeros in the census rectangle (-4, 4.3) x (0, T)."""
    if not 20.0 <= T <= 500.0:
        raise ValueError("census supported for 20 <= T <= 500")
    rect = Rectangle(CENSUS_SIGMA_MIN, CENSUS_SIGMA_MAX, CENSUS_T_MIN, T)
    return localize(rect, diam_floor=diam_floor, jobs=jobs)


def census_compare(T: float, records: list[ZeroRecord] | None = None,
                   jobs: int = 1) -> tuple[int, float, float]:
    """(N_computed, N_formula, residual) for the census box capped at height T.

    Precomputed records from a taller census may be passed in and are
    filtered to Im < T.
    """
    if records is None:
        records = census(T, jobs=jobs)
    n_comp = sum(1 for r in records if CENSUS_T_MIN <= r.location.imag < T
                 and CENSUS_SIGMA_MIN <= r.location.real <= CENSUS_SIGMA_MAX)
    n_form = count_formula(T)
    return n_comp, n_form, n_comp - n_form


def density_count(T: float, delta: float,
                  records: list[ZeroRecord] | None = None, jobs: int = 1) -> int:
    """Number of zeros with Re > 5/6 + delta and |Im| <= T (conjugates count)."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    edge = 5.0 / 6.0 + delta
    if edge >= CENSUS_SIGMA_MAX:
        return 0  # certified zero-free
    if records is None:
        records = localize(Rectangle(edge, CENSUS_SIGMA_MAX, CENSUS_T_MIN, T),
                           jobs=jobs)
    n_upper = sum(1 for r in records
                  if r.location.real > edge and CENSUS_T_MIN <= r.location.imag <= T)
    return 2 * n_upper
