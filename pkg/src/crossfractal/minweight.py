"""Smallest support of a Z2-harmonic function pinned at the origin, inside a box.

Only the parity constraints at interior points of ``[-r, r]^n`` are imposed,
so the result is a box-local relaxation N'_n(r) <= N_n(r): any global
solution restricted to the box satisfies every interior constraint.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BudgetExceeded
from .lattice import Box, PointSet, unit_vectors

MAX_SOLUTIONS = 2**26
_TABLE_BITS = 20


class InfeasibleSystem(RuntimeError):
    pass


@dataclass(frozen=True)
class ParitySystem:
    """Rows are Python-int bitmasks over the box points (bit j = j-th point in
    lexicographic order); ``rhs`` holds the right-hand side bits."""

    box: Box
    variables: PointSet
    rows: tuple[int, ...]
    rhs: tuple[int, ...]

    @property
    def n_constraints(self) -> int:
        return len(self.rows)


def parity_system(n: int, r: int) -> ParitySystem:
    box = Box.cube(n, r)
    variables = box.points()
    side = box.side
    strides = [side ** (n - 1 - i) for i in range(n)]

    def index(p) -> int:
        return sum((c + r) * s for c, s in zip(p, strides))

    rows, rhs = [], []
    if r >= 1:
        for y in box.interior().points().array.tolist():
            mask = 0
            for v in unit_vectors(n).tolist():
                mask |= 1 << index([a + b for a, b in zip(y, v)])
            rows.append(mask)
            rhs.append(0)
    rows.append(1 << index([0] * n))
    rhs.append(1)
    return ParitySystem(box, variables, tuple(rows), tuple(rhs))


@dataclass(frozen=True)
class Reduced:
    n_vars: int
    pivots: tuple[int, ...]
    free: tuple[int, ...]
    particular: int
    basis: tuple[int, ...]  # one null-space vector per free variable


def reduce(system: ParitySystem) -> Reduced:
    """Row-reduce over GF(2), pivoting on columns in lexicographic point order."""
    nv = len(system.variables)
    rows = [m | (b << nv) for m, b in zip(system.rows, system.rhs)]
    pivots = []
    rank = 0
    for col in range(nv):
        bit = 1 << col
        for i in range(rank, len(rows)):
            if rows[i] & bit:
                rows[rank], rows[i] = rows[i], rows[rank]
                break
        else:
            continue
        prow = rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i] & bit:
                rows[i] ^= prow
        pivots.append(col)
        rank += 1
    full = (1 << nv) - 1
    if any(row & full == 0 and row >> nv for row in rows[rank:]):
        raise InfeasibleSystem("parity constraints are inconsistent")
    free = [c for c in range(nv) if c not in set(pivots)]
    particular = 0
    for i, col in enumerate(pivots):
        if rows[i] >> nv:
            particular |= 1 << col
    basis = []
    for f in free:
        vec = 1 << f
        for i, col in enumerate(pivots):
            if rows[i] >> f & 1:
                vec |= 1 << col
        basis.append(vec)
    return Reduced(nv, tuple(pivots), tuple(free), particular, tuple(basis))


def _words(v: int, n_words: int) -> np.ndarray:
    return np.array([(v >> (64 * w)) & 0xFFFFFFFFFFFFFFFF for w in range(n_words)], dtype=np.uint64)


@dataclass(frozen=True)
class MinSupport:
    n: int
    r: int
    weight: int
    witness: PointSet
    free_bits: int

    def __iter__(self):
        yield self.weight
        yield self.witness

    def summary(self) -> str:
        return f"n={self.n} r={self.r} relaxed_min_weight={self.weight}"


def _scan(red: Reduced, table: np.ndarray, highs: range, n_high: int) -> tuple[int, int, int]:
    """Best (weight, high pattern, low pattern) over the given high patterns.

    ``table`` has shape (n_words, 2**n_low).
    """
    n_words = table.shape[0]
    acc = np.uint8 if n_words <= 3 else np.uint16
    best = (1 << 62, 0, 0)
    for h in highs:
        v = red.particular
        for j in range(n_high):
            if h >> (n_high - 1 - j) & 1:
                v ^= red.basis[j]
        off = _words(v, n_words)
        weights = np.bitwise_count(table[0] ^ off[0]).astype(acc)
        for w in range(1, n_words):
            weights += np.bitwise_count(table[w] ^ off[w])
        lo = int(np.argmin(weights))
        if int(weights[lo]) < best[0]:
            best = (int(weights[lo]), h, lo)
    return best


def min_support(n: int, r: int, budget: int = MAX_SOLUTIONS, threads: int = 1) -> MinSupport:
    """Exact minimum support weight over the solution space of the box system.

    Ties go to the lexicographically first free-variable bit pattern (free
    variables in lexicographic point order, first variable most significant).
    """
    if n < 1 or r < 0:
        raise ValueError("need n >= 1 and r >= 0")
    system = parity_system(n, r)
    red = reduce(system)
    n_free = len(red.free)
    if 2**n_free > budget:
        raise BudgetExceeded(f"solution space has 2^{n_free} elements, budget is {budget}")
    n_words = (red.n_vars + 63) // 64
    n_low = min(n_free, _TABLE_BITS)
    n_high = n_free - n_low
    table = np.zeros((1 << n_low, n_words), dtype=np.uint64)
    for b in range(n_low):
        vec = _words(red.basis[n_free - 1 - b], n_words)
        table[1 << b : 2 << b] = table[: 1 << b] ^ vec
    table = np.ascontiguousarray(table.T)  # one contiguous row per word
    highs = range(1 << n_high)
    if threads > 1 and len(highs) > 1:
        step = -(-len(highs) // threads)
        parts = [highs[i : i + step] for i in range(0, len(highs), step)]
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(lambda hs: _scan(red, table, hs, n_high), parts))
        weight, h, lo = min(results)
    else:
        weight, h, lo = _scan(red, table, highs, n_high)
    pattern = h << n_low | lo
    sol = red.particular
    for j in range(n_free):
        if pattern >> (n_free - 1 - j) & 1:
            sol ^= red.basis[j]
    mask = np.array([sol >> i & 1 for i in range(red.n_vars)], dtype=bool)
    witness = system.variables.select(mask)
    assert len(witness) == weight
    return MinSupport(n, r, weight, witness, n_free)


def relaxed_weights(n: int, radii: Sequence[int], budget: int = MAX_SOLUTIONS) -> list[int]:
    return [min_support(n, r, budget).weight for r in radii]


def lower_bound_check(n: int, radii: int | Sequence[int], budget: int = MAX_SOLUTIONS) -> bool:
    """Consistency probe for the growth lower bound; not a proof.

    Every weight must be >= 1. For n = 2 the weights must also be
    nondecreasing and grow at least linearly: ``w(r) >= w(r0) * r / r0``
    relative to the smallest tested radius ``r0``.
    """
    radii = [radii] if isinstance(radii, int) else sorted(radii)
    weights = relaxed_weights(n, radii, budget)
    if any(w < 1 for w in weights):
        return False
    if n == 2:
        if any(b < a for a, b in zip(weights, weights[1:])):
            return False
        r0, w0 = radii[0], weights[0]
        if r0 > 0 and any(w * r0 < w0 * r for r, w in zip(radii, weights)):
            return False
    return True
