"""Box counts and log-log dimension fits."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .fractal import _clipped_level, _guard, build_xinf_box, build_xk, build_xplus_box, truncation_level, MAX_LEVEL_SIZE
from .lattice import PointSet
from .setfile import read_set

GENERATORS = ("xk", "xinf", "xplus", "file")


class DegenerateSeries(ValueError):
    pass


@dataclass(frozen=True)
class CountSeries:
    radii: tuple[int, ...]
    counts: tuple[int, ...]

    def __post_init__(self):
        if len(self.radii) != len(self.counts):
            raise ValueError("radii and counts differ in length")
        if any(r <= 0 for r in self.radii) or any(b <= a for a, b in zip(self.radii, self.radii[1:])):
            raise ValueError("radii must be positive and strictly increasing")
        if any(c < 0 for c in self.counts):
            raise ValueError("counts must be nonnegative")

    def to_csv(self, fit: tuple[float, float] | None = None) -> str:
        lines = ["radius,count"] + [f"{r},{c}" for r, c in zip(self.radii, self.counts)]
        if fit is not None:
            lines.append(f"# slope={fit[0]:.6f} residual={fit[1]:.6f}")
        return "\n".join(lines) + "\n"


def powers_of_two(lo: int, hi: int) -> list[int]:
    return [2**j for j in range(lo, hi + 1)]


def counts_within(points: PointSet, radii: Sequence[int]) -> list[int]:
    norms = np.sort(points.max_norms())
    return [int(c) for c in np.searchsorted(norms, np.asarray(radii), side="right")]


def _xk_count(d: int, r: int, k: int | None) -> int:
    if k is None:
        return len(_clipped_level(d, truncation_level(r), r))
    return counts_within(build_xk(d, k).points, [r])[0]


def count_in_boxes(
    generator: str,
    d: int | None,
    radii: Sequence[int],
    *,
    k: int | None = None,
    source: PointSet | str | Path | None = None,
    budget: int = MAX_LEVEL_SIZE,
    threads: int = 1,
) -> CountSeries:
    """Counts of the generated set inside ``[-r, r]^d`` for each radius.

    ``xk`` with ``k=None`` uses the stabilizing level for each radius.
    ``file`` counts the set given by ``source`` (a PointSet or a set file).
    """
    radii = tuple(int(r) for r in radii)
    CountSeries(radii, (0,) * len(radii))  # validates the radii
    rmax = radii[-1]
    if generator == "xinf":
        counts = counts_within(build_xinf_box(d, rmax, budget=budget), radii)
    elif generator == "xplus":
        counts = counts_within(build_xplus_box(d, rmax, budget=budget), radii)
    elif generator == "xk":
        if k is None:
            _guard(d, truncation_level(rmax), budget)
        else:
            _guard(d, k, budget)
        if threads > 1:
            with ThreadPoolExecutor(threads) as pool:
                counts = list(pool.map(lambda r: _xk_count(d, r, k), radii))
        else:
            counts = [_xk_count(d, r, k) for r in radii]
    elif generator == "file":
        if source is None:
            raise ValueError("the file generator needs a source")
        pts = source if isinstance(source, PointSet) else read_set(source)
        if d is not None and pts.d != d:
            raise ValueError(f"set has dimension {pts.d}, expected {d}")
        counts = counts_within(pts, radii)
    else:
        raise ValueError(f"unknown generator {generator!r}; expected one of {GENERATORS}")
    return CountSeries(radii, tuple(counts))


def fit_dimension(series: CountSeries) -> tuple[float, float]:
    """Least-squares slope of ln(count) against ln(radius) and the RMS residual."""
    if len(series.radii) < 3:
        raise DegenerateSeries("need at least three radii")
    zero = [r for r, c in zip(series.radii, series.counts) if c < 1]
    if zero:
        raise DegenerateSeries(f"zero counts at radii {zero}")
    x = np.log(np.asarray(series.radii, dtype=float))
    y = np.log(np.asarray(series.counts, dtype=float))
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    return float(slope), float(math.sqrt(float(np.mean(resid**2))))
