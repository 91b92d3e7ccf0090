"""Figure emitters: argument domain-coloring of (zeta'/zeta)' as binary PPM
(bit-exact goldens, no image dependencies) and the resurgence curve as CSV,
with matplotlib companions for the report path.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceeded
from .special import zeta_derivs_batch
from .stencil import NuGrid, grid_nu

PIXEL_BUDGET = 10 ** 7

TWO_PI = 2.0 * math.pi


def hue_from_arg(arg: np.ndarray) -> np.ndarray:
    """hue = (arg + pi) / 2 pi in [0, 1)."""
    h = (arg + math.pi) / TWO_PI
    return np.mod(h, 1.0)


def hsv_wheel_rgb(hue: np.ndarray) -> np.ndarray:
    """Exact integer HSV->RGB for S = V = 1: channel = floor(255 c + 1/2).

    With h6 = 6 hue, i = floor(h6), f = h6 - i:
      i = 0: (1, f, 0)      i = 1: (1-f, 1, 0)    i = 2: (0, 1, f)
      i = 3: (0, 1-f, 1)    i = 4: (f, 0, 1)      i = 5: (1, 0, 1-f)
    """
    h6 = np.clip(hue, 0.0, np.nextafter(1.0, 0.0)) * 6.0
    i = np.floor(h6).astype(np.int64) % 6
    f = h6 - np.floor(h6)
    one = np.ones_like(f)
    zero = np.zeros_like(f)
    lut = [
        (one, f, zero),
        (1.0 - f, one, zero),
        (zero, one, f),
        (zero, 1.0 - f, one),
        (f, zero, one),
        (one, zero, 1.0 - f),
    ]
    rgb = np.empty(hue.shape + (3,), dtype=np.uint8)
    for c in range(3):
        chan = np.select([i == k for k in range(6)], [lut[k][c] for k in range(6)])
        rgb[..., c] = np.floor(255.0 * chan + 0.5).astype(np.uint8)
    return rgb


@dataclass
class PhaseImage:
    width: int
    height: int
    rect: tuple[float, float, float, float]
    px_per_unit: float
    pixels: np.ndarray                 # (height, width, 3) uint8, row 0 = top
    hue: np.ndarray                    # (height, width) float, same layout
    overlay: list = field(default_factory=list)


def phase_plot(rect, px_per_unit: float, overlay=None,
               guides: tuple[float, ...] = (0.0, 1.0)) -> PhaseImage:
    """Argument plot of (zeta'/zeta)' over the rectangle, one lattice point
    per pixel, with dotted vertical guides."""
    sigma_min, sigma_max, t_min, t_max = [float(v) for v in _astuple(rect)]
    h = 1.0 / float(px_per_unit)
    cols = int(round((sigma_max - sigma_min) * px_per_unit)) + 1
    rows = int(round((t_max - t_min) * px_per_unit)) + 1
    if rows * cols > PIXEL_BUDGET:
        raise BudgetExceeded(f"{rows} x {cols} exceeds {PIXEL_BUDGET} pixels")
    if h <= 0.1:
        grid = grid_nu((sigma_min, sigma_min + (cols - 1) * h,
                        t_min, t_min + (rows - 1) * h), h, check_probes=0)
        zeta, nu = grid.zeta, grid.nu
    else:
        # too coarse for the shared stencil: take the derivatives directly
        pts = (sigma_min + h * np.arange(cols))[None, :] + \
            1j * (t_min + h * np.arange(rows))[:, None]
        z0, z1, z2 = zeta_derivs_batch(pts)
        zeta, nu = z0, z0 * z2 - z1 * z1
    with np.errstate(divide="ignore", invalid="ignore"):
        log2nd = nu / (zeta * zeta)
    arg = np.angle(log2nd)
    hue = hue_from_arg(arg)[::-1, :]          # flip so row 0 is t_max
    pixels = hsv_wheel_rgb(hue)

    for g in guides:
        if sigma_min <= g <= sigma_max:
            j = int(round((g - sigma_min) * px_per_unit))
            pixels[::2, j, :] //= 2            # dotted: darken every other row
    img = PhaseImage(cols, rows, (sigma_min, sigma_max, t_min, t_max),
                     px_per_unit, pixels, hue, overlay=list(overlay or []))
    for rec in img.overlay:
        _draw_marker(img, rec.location if hasattr(rec, "location") else rec)
    return img


def _astuple(rect):
    if hasattr(rect, "sigma_min"):
        return (rect.sigma_min, rect.sigma_max, rect.t_min, rect.t_max)
    return tuple(rect)


def _draw_marker(img: PhaseImage, z: complex, size: int = 3) -> None:
    smin, _, tmin, tmax = img.rect
    j = int(round((z.real - smin) * img.px_per_unit))
    i = int(round((tmax - z.imag) * img.px_per_unit))
    if not (0 <= i < img.height and 0 <= j < img.width):
        return
    for d in range(-size, size + 1):
        if 0 <= i + d < img.height:
            img.pixels[i + d, j, :] = 0
        if 0 <= j + d < img.width:
            img.pixels[i, j + d, :] = 0


def write_ppm(img: PhaseImage, path) -> None:
    """Binary P6, 8-bit; identical inputs produce identical bytes."""
    with open(path, "wb") as fh:
        fh.write(f"P6\n{img.width} {img.height}\n255\n".encode("ascii"))
        fh.write(img.pixels.tobytes())


def read_ppm(path) -> np.ndarray:
    with open(path, "rb") as fh:
        magic = fh.readline().strip()
        if magic != b"P6":
            raise ValueError("not a binary PPM")
        dims = fh.readline().split()
        w, hgt = int(dims[0]), int(dims[1])
        fh.readline()  # maxval
        data = np.frombuffer(fh.read(w * hgt * 3), dtype=np.uint8)
    return data.reshape(hgt, w, 3)


def ring_hue_winding(img: PhaseImage, z: complex, radius_px: int = 4) -> int:
    """Phase winding read straight off the image around a pixel: the signed
    number of full hue turns along a small pixel ring."""
    smin, _, tmin, tmax = img.rect
    cj = (z.real - smin) * img.px_per_unit
    ci = (tmax - z.imag) * img.px_per_unit
    n = max(16, 8 * radius_px)
    total = 0.0
    prev = None
    first = None
    for k in range(n + 1):
        ang = TWO_PI * k / n
        # row index grows downward (toward smaller t): counterclockwise in the
        # s-plane means subtracting the sine here
        i = int(round(ci - radius_px * math.sin(ang)))
        j = int(round(cj + radius_px * math.cos(ang)))
        i = min(max(i, 0), img.height - 1)
        j = min(max(j, 0), img.width - 1)
        hu = img.hue[i, j] if k < n else first
        if k == 0:
            first = hu
        if prev is not None:
            d = hu - prev
            d -= round(d)      # hue lives on a circle of circumference 1
            total += d
        prev = hu
    return int(round(total))


# ---------------------------------------------------------------------------
# Resurgence curve: Re (zeta'/zeta)'(1 + 2 i t)
# ---------------------------------------------------------------------------


def resurgence_curve(t_lo: float, t_hi: float, samples: int) -> np.ndarray:
    """(samples, 2) array of (t, Re (zeta'/zeta)'(1+2it))."""
    if t_lo <= 0.0:
        raise ValueError("start sampling at t > 0 to stay off the pole at s = 1")
    t = np.linspace(t_lo, t_hi, samples)
    s = 1.0 + 2.0j * t
    z0, z1, z2 = zeta_derivs_batch(s)
    val = (z0 * z2 - z1 * z1) / (z0 * z0)
    return np.column_stack([t, val.real])


def write_resurgence_csv(curve: np.ndarray, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "re_log2nd_1_plus_2it"])
        for t, v in curve:
            w.writerow([f"{t:.12g}", f"{v:.12g}"])


def local_extrema(curve: np.ndarray) -> list[tuple[float, float]]:
    t, v = curve[:, 0], curve[:, 1]
    out = []
    for i in range(1, len(t) - 1):
        if (v[i] - v[i - 1]) * (v[i + 1] - v[i]) < 0:
            out.append((float(t[i]), float(v[i])))
    return out


# ---------------------------------------------------------------------------
# Matplotlib companions for the report path
# ---------------------------------------------------------------------------


def _plt():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def figure_resurgence(curve: np.ndarray, path) -> None:
    plt = _plt()
    fig, ax = plt.subplots(figsize=(9, 3.2))
    ax.plot(curve[:, 0], curve[:, 1], lw=0.9)
    ax.set_xlabel("t")
    ax.set_ylabel(r"Re $(\zeta'/\zeta)'(1+2it)$")
    ax.axhline(0.0, color="0.8", lw=0.6)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def figure_sum_check(xs, residuals, bounds, path) -> None:
    plt = _plt()
    fig, ax = plt.subplots(figsize=(7, 4.2))
    ax.loglog(xs, np.abs(residuals), ".", ms=3, label="|A(x) - x p(log x)|")
    ax.loglog(xs, bounds, "-", lw=1.0, label=r"10 $\sqrt{x}\,\log^2 x$")
    ax.set_xlabel("x")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def figure_count_check(rows, path) -> None:
    """rows: list of dicts with T, n_computed, n_formula."""
    plt = _plt()
    fig, ax = plt.subplots(figsize=(7, 4.2))
    ts = [r["T"] for r in rows]
    ax.plot(ts, [r["n_computed"] for r in rows], "o-", label="census")
    ax.plot(ts, [r["n_formula"] for r in rows], "s--", label="main term")
    ax.set_xlabel("T")
    ax.set_ylabel("zeros up to height T")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def figure_phase_png(img: PhaseImage, path) -> None:
    plt = _plt()
    smin, smax, tmin, tmax = img.rect
    fig, ax = plt.subplots(figsize=(6, 6 * img.height / max(img.width, 1)))
    ax.imshow(img.pixels, extent=(smin, smax, tmin, tmax), aspect="auto",
              interpolation="nearest")
    ax.set_xlabel(r"$\sigma$")
    ax.set_ylabel("t")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
