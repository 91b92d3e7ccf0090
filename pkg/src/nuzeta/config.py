"""Flat key=value configuration for the CLI; flags override file values."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

DEFAULTS = {
    "em_truncation_floor": "",        # empty = use the built-in rule
    "grid_h": "0.01",
    "census_rect": "-4,4.3,0.05,100",
    "output_dir": ".",
    "workers": "1",
}


@dataclass
class Config:
    em_truncation_floor: int | None = None
    grid_h: float = 0.01
    census_rect: tuple[float, float, float, float] = (-4.0, 4.3, 0.05, 100.0)
    output_dir: Path = Path(".")
    workers: int = 1
    raw: dict = field(default_factory=dict)


def parse_rect(text: str) -> tuple[float, float, float, float]:
    parts = [float(p) for p in text.replace(" ", "").split(",")]
    if len(parts) != 4:
        raise ValueError(f"rectangle needs 4 numbers, got {text!r}")
    a, b, c, d = parts
    if not (a < b and c < d and all(math.isfinite(v) for v in parts)):
        raise ValueError(f"rectangle {text!r} is empty or non-finite")
    return a, b, c, d


def load_config(path: str | None = None) -> Config:
    """Read key=value pairs; unknown keys rejected, values validated against
    the module preconditions they feed."""
    values = dict(DEFAULTS)
    if path is not None:
        for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, val = line.partition("=")
            key = key.strip()
            if key not in DEFAULTS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = val.strip()

    floor = None
    if values["em_truncation_floor"]:
        floor = int(values["em_truncation_floor"])
        if not 30 <= floor <= 10 ** 6:
            raise ValueError("em_truncation_floor must be in [30, 1e6]")
    grid_h = float(values["grid_h"])
    if not 1e-6 <= grid_h <= 0.1:
        raise ValueError("grid_h must be in [1e-6, 0.1]")
    workers = int(values["workers"])
    if workers < 1:
        raise ValueError("workers must be >= 1")
    return Config(
        em_truncation_floor=floor,
        grid_h=grid_h,
        census_rect=parse_rect(values["census_rect"]),
        output_dir=Path(values["output_dir"]),
        workers=workers,
        raw=values,
    )
