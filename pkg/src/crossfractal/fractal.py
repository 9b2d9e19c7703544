"""The sumset fractals X_k, truncations of X_inf, and the thickened set X_plus.

Indexing: ``X_0 = {0}`` and ``X_k = {±e_i} + 2 X_{k-1}``, i.e. X_k has exactly
k summands ``sum_{i<k} 2^i {±e_j}``. With this choice ``|X_k| = (2d)^k`` and
the GF(2) polynomial of X_k is ``S^(2^k - 1)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceeded
from .lattice import Box, PointSet, cross, dilate, minkowski_sum, origin, unit_vectors

MAX_LEVEL_SIZE = 2**31


@dataclass(frozen=True)
class FractalLevel:
    d: int
    k: int
    points: PointSet

    def __len__(self) -> int:
        return len(self.points)


def units(d: int) -> PointSet:
    """``{±e_i}`` as a point set."""
    return PointSet(unit_vectors(d), d)


def truncation_level(r: int) -> int:
    """Level whose truncation to ``[-r, r]^d`` already equals that of X_inf."""
    if r < 1:
        raise ValueError("radius must be >= 1")
    return (r - 1).bit_length() + 2


def _guard(d: int, k: int, budget: int) -> None:
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if k < 0:
        raise ValueError("level must be >= 0")
    if (2 * d) ** k > budget:
        raise BudgetExceeded(f"|X_{k}| = {(2 * d) ** k} in d={d} exceeds budget {budget}")


def recurrence_step(prev: PointSet) -> PointSet:
    """``{±e_i} + 2 * prev``."""
    return minkowski_sum(units(prev.d), dilate(prev, 2))


def build_xk(d: int, k: int, budget: int = MAX_LEVEL_SIZE) -> FractalLevel:
    _guard(d, k, budget)
    pts = PointSet([origin(d)])
    for _ in range(k):
        pts = recurrence_step(pts)
    return FractalLevel(d, k, pts)


def _clipped_level(d: int, k: int, r: int) -> PointSet:
    """``X_k ∩ [-r, r]^d`` without materializing X_k.

    A point ``eps + 2y`` lies in the box only if ``|y_i| <= (r + 1) // 2``, so
    each recurrence step only needs the previous level clipped to that radius.
    """
    radii = [r]
    for _ in range(k):
        radii.append((radii[-1] + 1) // 2)
    radii.reverse()
    pts = PointSet([origin(d)])
    for rad in radii[1:]:
        pts = recurrence_step(pts).clip(Box.cube(d, rad))
    return pts


def build_xinf_box(d: int, r: int, budget: int = MAX_LEVEL_SIZE, check: bool = True) -> PointSet:
    """``X_inf ∩ [-r, r]^d``.

    Equal to ``build_xk(d, k) ∩ box`` for ``k = truncation_level(r)``; the
    level is clipped as it is built. With ``check`` the next level is built
    too and must agree on the box.
    """
    if r == 0:
        _guard(d, 0, budget)
        return PointSet.empty(d)
    k = truncation_level(r)
    _guard(d, k, budget)
    pts = _clipped_level(d, k, r)
    if check and _clipped_level(d, k + 1, r) != pts:
        raise AssertionError(f"X_k ∩ [-{r},{r}]^{d} did not stabilize at k={k}")
    return pts


def build_xplus_box(d: int, r: int, budget: int = MAX_LEVEL_SIZE, check: bool = True) -> PointSet:
    """``(X_inf + {0, ±e_i}) ∩ [-r, r]^d``."""
    if r < 0:
        raise ValueError("radius must be >= 0")
    inner = build_xinf_box(d, r + 1, budget=budget, check=check)
    return minkowski_sum(inner, cross(origin(d))).clip(Box.cube(d, r))


def decomposition(level: FractalLevel) -> list[PointSet]:
    """The 2d translates ``2 X_{k-1} + eps`` whose disjoint union is X_k."""
    if level.k < 1:
        raise ValueError("level 0 has no decomposition")
    prev = dilate(build_xk(level.d, level.k - 1).points, 2)
    return [prev.translate(v) for v in unit_vectors(level.d).tolist()]


def check_decomposition(level: FractalLevel) -> bool:
    parts = decomposition(level)
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            if not parts[i].isdisjoint(parts[j]):
                return False
    total = PointSet(np.concatenate([p.array for p in parts]), level.d)
    return sum(len(p) for p in parts) == len(level.points) and total == level.points


def check_stabilization(d: int, r: int, extra: int = 2) -> bool:
    """Every level from ``truncation_level(r)`` on agrees with it inside the box."""
    box = Box.cube(d, r)
    k0 = truncation_level(r)
    ref = build_xk(d, k0).points.clip(box)
    return all(build_xk(d, k).points.clip(box) == ref for k in range(k0 + 1, k0 + 1 + extra))
