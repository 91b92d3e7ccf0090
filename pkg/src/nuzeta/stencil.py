"""Grid differentiation: the 9-point complex stencil and whole-rectangle
evaluation of nu with one zeta summation per lattice point.

The stencil weights come from the 9x9 Taylor-moment system on the offsets
{0, +-h, +-ih, +-h+-ih}; solving it in unit offsets and rescaling keeps the
system well conditioned for any h in range.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from io import BufferedReader, BufferedWriter

import numpy as np

from .errors import OutOfRange, SingularSystem, StepTooCoarse
from .special import zeta_derivs_batch

H_MIN = 1e-6
H_MAX = 0.1

# Unit-cell displacements, fixed order: center, axes, diagonals.
UNIT_OFFSETS = np.array(
    [0.0, 1.0, -1.0, 1.0j, -1.0j, 1.0 + 1.0j, 1.0 - 1.0j, -1.0 + 1.0j, -1.0 - 1.0j],
    dtype=np.complex128,
)
# Lattice steps (dcol, drow) matching UNIT_OFFSETS with rows increasing in t.
LATTICE_STEPS = [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1),
                 (1, 1), (1, -1), (-1, 1), (-1, -1)]


@dataclass(frozen=True)
class StencilScheme:
    h: float
    offsets: np.ndarray   # the 9 complex displacements, h-scaled
    c1: np.ndarray        # weights recovering f'
    c2: np.ndarray        # weights recovering f''
    order: int            # highest Taylor moment annihilated


def build_stencil(h: float) -> StencilScheme:
    """Solve the 9x9 moment system so that sum c1_k f(s + d_k) = f'(s) + O(h^8)
    and sum c2_k f(s + d_k) = f''(s) + O(h^7) for analytic f."""
    if not H_MIN <= h <= H_MAX:
        raise OutOfRange(f"h = {h} outside [{H_MIN}, {H_MAX}]")
    m = np.vander(UNIT_OFFSETS, 9, increasing=True).T  # m[j, k] = d_k^j
    rhs1 = np.zeros(9, dtype=np.complex128)
    rhs1[1] = 1.0
    rhs2 = np.zeros(9, dtype=np.complex128)
    rhs2[2] = 2.0
    try:
        sol = np.linalg.solve(m, np.column_stack([rhs1, rhs2]))
    except np.linalg.LinAlgError as exc:  # distinct offsets: cannot happen
        raise SingularSystem(str(exc)) from exc
    c1 = sol[:, 0] / h
    c2 = sol[:, 1] / (h * h)
    return StencilScheme(h=h, offsets=UNIT_OFFSETS * h, c1=c1, c2=c2, order=8)


@lru_cache(maxsize=8)
def cached_stencil(h: float) -> StencilScheme:
    return build_stencil(h)


class _QC:
    """Complex numbers over exact rationals, just enough for 9x9 elimination."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def __add__(self, o):
        return _QC(self.re + o.re, self.im + o.im)

    def __sub__(self, o):
        return _QC(self.re - o.re, self.im - o.im)

    def __mul__(self, o):
        return _QC(self.re * o.re - self.im * o.im,
                   self.re * o.im + self.im * o.re)

    def __truediv__(self, o):
        d = o.re * o.re + o.im * o.im
        return _QC((self.re * o.re + self.im * o.im) / d,
                   (self.im * o.re - self.re * o.im) / d)

    def __bool__(self):
        return bool(self.re) or bool(self.im)


@lru_cache(maxsize=1)
def exact_unit_weights() -> tuple[tuple[tuple[Fraction, Fraction], ...],
                                  tuple[tuple[Fraction, Fraction], ...]]:
    """The unit-offset stencil weights as exact rational pairs (re, im).

    Lets tests measure the scheme's true truncation order in arbitrary
    precision, where float64 roundoff would otherwise drown the O(h^8) term.
    """
    offs = [(Fraction(int(d.real)), Fraction(int(d.imag))) for d in UNIT_OFFSETS]
    rows = []
    for j in range(9):
        row = []
        for (re, im) in offs:
            p = _QC(1)
            base = _QC(re, im)
            for _ in range(j):
                p = p * base
            row.append(p)
        rows.append(row)
    sols = []
    for target_j, target_v in ((1, 1), (2, 2)):
        aug = [[rows[j][k] for k in range(9)] + [_QC(target_v if j == target_j else 0)]
               for j in range(9)]
        n = 9
        for col in range(n):
            piv = next(r for r in range(col, n) if aug[r][col])
            aug[col], aug[piv] = aug[piv], aug[col]
            inv = aug[col][col]
            aug[col] = [x / inv for x in aug[col]]
            for r in range(n):
                if r != col and aug[r][col]:
                    f = aug[r][col]
                    aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
        sols.append(tuple((aug[r][n].re, aug[r][n].im) for r in range(n)))
    return sols[0], sols[1]


def stencil_derivative(f, s: complex, h: float = 1e-3) -> complex:
    """f'(s) by the 9-point scheme; 8 evaluations of f plus the center."""
    sch = cached_stencil(h)
    return sum(c * f(s + d) for c, d in zip(sch.c1, sch.offsets))


@dataclass(frozen=True)
class NuGrid:
    """nu over a rectangular lattice; grid[i, j] sits at sigma_min + j h,
    t_min + i h (row 0 = bottom edge)."""

    sigma_min: float
    sigma_max: float
    t_min: float
    t_max: float
    h: float
    zeta: np.ndarray      # (rows, cols) complex
    nu: np.ndarray        # (rows, cols) complex
    zeta_evals: int

    @property
    def shape(self) -> tuple[int, int]:
        return self.nu.shape

    def points(self) -> np.ndarray:
        rows, cols = self.nu.shape
        sig = self.sigma_min + self.h * np.arange(cols)
        t = self.t_min + self.h * np.arange(rows)
        return sig[None, :] + 1j * t[:, None]


def grid_nu(rect, h: float, check_probes: int = 8,
            probe_rtol: float = 1e-4, rng_seed: int = 7) -> NuGrid:
    """Evaluate zeta once per lattice point and assemble nu everywhere.

    Interior derivatives come from the shared stencil; the one-cell boundary
    ring falls back to direct zeta_derivs. Probes compare stencil nu against
    direct nu and reject a too-coarse step.
    """
    sigma_min, sigma_max, t_min, t_max = _rect_tuple(rect)
    if not H_MIN <= h <= H_MAX:
        raise OutOfRange(f"h = {h} outside [{H_MIN}, {H_MAX}]")
    cols = int(round((sigma_max - sigma_min) / h)) + 1
    rows = int(round((t_max - t_min) / h)) + 1
    if rows < 3 or cols < 3:
        raise OutOfRange("grid needs at least 3 points per side")

    pts = (sigma_min + h * np.arange(cols))[None, :] + \
        1j * (t_min + h * np.arange(rows))[:, None]
    z0, z1b, z2b = zeta_derivs_batch(pts)
    evals = rows * cols

    sch = cached_stencil(h)
    zp = np.zeros_like(z0)
    zpp = np.zeros_like(z0)
    core = np.s_[1:-1, 1:-1]
    for w1, w2, (dc, dr) in zip(sch.c1, sch.c2, LATTICE_STEPS):
        block = z0[1 + dr: rows - 1 + dr, 1 + dc: cols - 1 + dc]
        zp[core] += w1 * block
        zpp[core] += w2 * block
    # boundary ring: direct derivatives (already computed in the batch)
    mask = np.zeros((rows, cols), dtype=bool)
    mask[0, :] = mask[-1, :] = True
    mask[:, 0] = mask[:, -1] = True
    zp[mask] = z1b[mask]
    zpp[mask] = z2b[mask]
    evals += int(mask.sum())  # ring re-counted as direct bundle evaluations

    nu = z0 * zpp - zp * zp

    rng = np.random.default_rng(rng_seed)
    if rows > 2 and cols > 2 and check_probes > 0:
        ii = rng.integers(1, rows - 1, size=check_probes)
        jj = rng.integers(1, cols - 1, size=check_probes)
        for i, j in zip(ii, jj):
            s = complex(pts[i, j])
            direct = z0[i, j] * z2b[i, j] - z1b[i, j] * z1b[i, j]
            scale = abs(z0[i, j] * z2b[i, j]) + abs(z1b[i, j]) ** 2 + 1e-300
            if abs(nu[i, j] - direct) / scale > probe_rtol:
                raise StepTooCoarse(
                    f"stencil nu at {s} deviates {abs(nu[i, j] - direct) / scale:.2e}"
                )
    return NuGrid(sigma_min, sigma_max, t_min, t_max, h, z0, nu, evals)


def _rect_tuple(rect) -> tuple[float, float, float, float]:
    if hasattr(rect, "sigma_min"):
        return (rect.sigma_min, rect.sigma_max, rect.t_min, rect.t_max)
    a, b, c, d = rect
    return float(a), float(b), float(c), float(d)


# ---------------------------------------------------------------------------
# Binary grid file: header (rows, cols as uint32 LE; rect and h as float64 LE)
# then the complex nu field row-major as interleaved re/im float64 pairs.
# ---------------------------------------------------------------------------

_MAGIC = b"NUGRID01"


def write_grid(grid: NuGrid, path) -> None:
    with open(path, "wb") as fh:
        _write_grid_stream(grid, fh)


def _write_grid_stream(grid: NuGrid, fh: BufferedWriter) -> None:
    rows, cols = grid.shape
    fh.write(_MAGIC)
    fh.write(struct.pack("<II", rows, cols))
    fh.write(struct.pack("<5d", grid.sigma_min, grid.sigma_max,
                         grid.t_min, grid.t_max, grid.h))
    inter = np.empty((rows, cols, 2), dtype="<f8")
    inter[..., 0] = grid.nu.real
    inter[..., 1] = grid.nu.imag
    fh.write(inter.tobytes())


def read_grid(path) -> NuGrid:
    with open(path, "rb") as fh:
        return _read_grid_stream(fh)


def _read_grid_stream(fh: BufferedReader) -> NuGrid:
    if fh.read(8) != _MAGIC:
        raise ValueError("not a nu grid file")
    rows, cols = struct.unpack("<II", fh.read(8))
    sigma_min, sigma_max, t_min, t_max, h = struct.unpack("<5d", fh.read(40))
    raw = np.frombuffer(fh.read(rows * cols * 16), dtype="<f8").reshape(rows, cols, 2)
    nu = raw[..., 0] + 1j * raw[..., 1]
    return NuGrid(sigma_min, sigma_max, t_min, t_max, h,
                  np.zeros_like(nu), nu, 0)


def self_test(h: float) -> dict:
    """Exactness and order diagnostics used by the CLI's stencil subcommand."""
    sch = build_stencil(h)
    out = {"h": h, "order": sch.order}
    out["moment_error"] = moment_error(sch)
    s0 = 1.0 + 1.0j
    worst = 0.0
    for j in range(9):
        d1 = sum(c * (s0 + d) ** j for c, d in zip(sch.c1, sch.offsets))
        d2 = sum(c * (s0 + d) ** j for c, d in zip(sch.c2, sch.offsets))
        worst = max(worst,
                    abs(d1 - (j * s0 ** (j - 1) if j >= 1 else 0.0)),
                    abs(d2 - (j * (j - 1) * s0 ** (j - 2) if j >= 2 else 0.0)))
    out["monomial_error"] = worst
    errs = []
    for hh in (h, h / 2.0):
        schh = cached_stencil(hh)
        approx = sum(c * np.exp(s0 + d) for c, d in zip(schh.c1, schh.offsets))
        errs.append(abs(approx - np.exp(s0)))
    out["exp_error_h"] = errs[0]
    out["exp_error_h2"] = errs[1]
    out["exp_halving_ratio"] = errs[0] / max(errs[1], 1e-300)
    out["max_c1"] = float(np.max(np.abs(sch.c1)))
    return out


def moment_error(sch: StencilScheme) -> float:
    """Worst relative defect of the Taylor moment conditions."""
    worst = 0.0
    unit = sch.offsets / sch.h
    for j in range(9):
        m1 = np.dot(sch.c1 * sch.h, unit ** j)
        m2 = np.dot(sch.c2 * sch.h * sch.h, unit ** j)
        t1 = 1.0 if j == 1 else 0.0
        t2 = 2.0 if j == 2 else 0.0
        scale = np.sum(np.abs(sch.c1 * sch.h) * np.abs(unit) ** j) + 1.0
        worst = max(worst, abs(m1 - t1) / scale, abs(m2 - t2) / scale)
    return worst
