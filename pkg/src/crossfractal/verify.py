"""Exhaustive set-level predicate checks over a box.

Only points whose whole cross (or step-2 cross) lies in the region are judged,
so truncating a set to the region never produces false witnesses.

Two evaluation strategies give identical reports: ``"dense"`` rasterizes the
region into a boolean grid and counts with shifted slices; ``"sparse"`` scatters
counts from the points of the set. ``"auto"`` picks sparse when the set's
footprint is smaller than the region interior.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .lattice import Box, PointSet, format_point, sum_keys, unit_vectors
from .setfile import point_lines

DENSE_CELL_LIMIT = 60_000_000


class Predicate(enum.Enum):
    HARMONIC = "harmonic"
    CROSS = "cross"
    SUPPORTIVE = "supportive"
    HARMONIC2 = "harmonic2"


# predicate -> (margin of judged points, whether the center counts)
_SHAPE = {
    Predicate.HARMONIC: (1, False),
    Predicate.CROSS: (1, True),
    Predicate.SUPPORTIVE: (1, True),
    Predicate.HARMONIC2: (2, False),
}


@dataclass(frozen=True)
class ViolationReport:
    predicate: Predicate
    witnesses: PointSet
    checked_region: Box

    @property
    def ok(self) -> bool:
        return len(self.witnesses) == 0

    def __len__(self) -> int:
        return len(self.witnesses)

    def header(self) -> str:
        return (
            f"# predicate={self.predicate.value} "
            f"region_center={format_point(self.checked_region.center)} "
            f"region_radius={self.checked_region.radius} violations={len(self.witnesses)}"
        )

    def serialize(self) -> str:
        return self.header() + "\n" + point_lines(self.witnesses)


def _judge_mask(counts: np.ndarray, member: np.ndarray, predicate: Predicate) -> np.ndarray:
    if predicate in (Predicate.HARMONIC, Predicate.HARMONIC2):
        return counts % 2 == 1
    if predicate is Predicate.CROSS:
        return counts == 1
    return (counts == 1) & ~member


def _dense(x: PointSet, region: Box, predicate: Predicate) -> PointSet:
    margin, with_center = _SHAPE[predicate]
    d, r = region.d, region.radius
    c = np.asarray(region.center, dtype=np.int64)
    grid = np.zeros((2 * r + 1,) * d, dtype=np.uint8)
    inside = x.clip(region).array
    if len(inside):
        grid[tuple((inside - c + r).T)] = 1
    core = (slice(margin, 2 * r + 1 - margin),) * d
    member = grid[core].astype(bool)
    counts = np.zeros(member.shape, dtype=np.int16)
    if with_center:
        counts += member
    for axis in range(d):
        for lo in (0, 2 * margin):
            sl = list(core)
            sl[axis] = slice(lo, lo + 2 * r + 1 - 2 * margin)
            counts += grid[tuple(sl)]
    idx = np.argwhere(_judge_mask(counts, member, predicate))
    # argwhere walks in C order, which is lexicographic in the coordinates
    return PointSet._trusted(idx.astype(np.int64) + (c - r + margin), d)


def _sparse(x: PointSet, region: Box, predicate: Predicate) -> PointSet:
    margin, with_center = _SHAPE[predicate]
    d = region.d
    inside = x.clip(region)
    if len(inside) == 0:
        return PointSet.empty(d)
    offs = unit_vectors(d) * margin
    if with_center:
        offs = np.vstack([np.zeros((1, d), dtype=np.int64), offs])
    frame = None
    blocks = []
    for frame, keys in sum_keys(inside, PointSet(offs, d)):
        blocks.append(keys)
    uniq, counts = np.unique(np.concatenate(blocks), return_counts=True)
    pts = frame.unpack(uniq)
    keep = region.shrink(margin).mask(pts)
    pts, counts = pts[keep], counts[keep]
    member = inside.contains_many(pts) if predicate is Predicate.SUPPORTIVE else np.zeros(len(pts), bool)
    return PointSet._trusted(pts[_judge_mask(counts, member, predicate)], d)


def violations(x: PointSet, region: Box, predicate: Predicate | str, strategy: str = "auto") -> ViolationReport:
    predicate = Predicate(predicate)
    if x.d != region.d:
        raise DimensionMismatch(f"set dimension {x.d} != region dimension {region.d}")
    margin = _SHAPE[predicate][0]
    if region.radius < margin:
        raise ValueError(f"{predicate.value} needs a region of radius >= {margin}")
    if strategy == "auto":
        interior = len(region.shrink(margin))
        footprint = len(x) * (2 * x.d + 1)
        strategy = "sparse" if footprint < interior or len(region) > DENSE_CELL_LIMIT else "dense"
    if strategy == "dense":
        wit = _dense(x, region, predicate)
    elif strategy == "sparse":
        wit = _sparse(x, region, predicate)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return ViolationReport(predicate, wit, region)


def harmonic_violations(x: PointSet, region: Box, strategy: str = "auto") -> ViolationReport:
    """Points with an odd number of neighbours in ``x``."""
    return violations(x, region, Predicate.HARMONIC, strategy)


def cross_violations(x: PointSet, region: Box, strategy: str = "auto") -> ViolationReport:
    """Points whose cross meets ``x`` in exactly one point."""
    return violations(x, region, Predicate.CROSS, strategy)


def supportive_violations(x: PointSet, region: Box, strategy: str = "auto") -> ViolationReport:
    """Points whose cross meets ``x`` in exactly one arm point (center-only hits are fine)."""
    return violations(x, region, Predicate.SUPPORTIVE, strategy)


def harmonic2_violations(x: PointSet, region: Box, strategy: str = "auto") -> ViolationReport:
    """Points with an odd number of points of ``x`` among ``y ± 2e_i``."""
    return violations(x, region, Predicate.HARMONIC2, strategy)
