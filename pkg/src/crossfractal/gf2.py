"""Sparse Laurent polynomials in d variables over GF(2).

A polynomial is identified with its support: the set of exponent vectors
whose coefficient is 1. Addition is symmetric difference and multiplication
keeps the sum-points reached by an odd number of pairs.
"""
from __future__ import annotations

import numpy as np

from .errors import BudgetExceeded, DimensionMismatch
from .lattice import PointSet, dilate, origin, sum_keys, unit_vectors

MAX_PAIRS = 10**8


class Gf2Laurent:
    __slots__ = ("support",)

    def __init__(self, support: PointSet):
        self.support = support

    @classmethod
    def zero(cls, d: int) -> "Gf2Laurent":
        return cls(PointSet.empty(d))

    @classmethod
    def one(cls, d: int) -> "Gf2Laurent":
        return cls(PointSet([origin(d)]))

    @property
    def d(self) -> int:
        return self.support.d

    def is_zero(self) -> bool:
        return len(self.support) == 0

    def __len__(self) -> int:
        return len(self.support)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Gf2Laurent):
            return NotImplemented
        return self.support == other.support

    def __hash__(self) -> int:
        return hash(self.support)

    def __repr__(self) -> str:
        return f"Gf2Laurent(d={self.d}, terms={len(self)})"

    def __add__(self, other: "Gf2Laurent") -> "Gf2Laurent":
        return Gf2Laurent(self.support ^ other.support)

    __sub__ = __add__

    def __mul__(self, other: "Gf2Laurent") -> "Gf2Laurent":
        return mul(self, other)

    def square(self) -> "Gf2Laurent":
        # Frobenius: cross terms pair up and cancel in characteristic 2
        return Gf2Laurent(dilate(self.support, 2))

    def __pow__(self, n: int) -> "Gf2Laurent":
        return power(self, n)


def laplace_symbol(d: int) -> Gf2Laurent:
    """``S = sum_i (x_i + 1/x_i)``."""
    return Gf2Laurent(PointSet(unit_vectors(d), d))


def mul(p: Gf2Laurent, q: Gf2Laurent, max_pairs: int = MAX_PAIRS) -> Gf2Laurent:
    if p.d != q.d:
        raise DimensionMismatch(f"dimension {p.d} != {q.d}")
    if p.is_zero() or q.is_zero():
        return Gf2Laurent.zero(p.d)
    if len(p) * len(q) > max_pairs:
        raise BudgetExceeded(f"{len(p)} x {len(q)} term product exceeds {max_pairs} pairs")
    odd_parts = []
    frame = None
    for frame, keys in sum_keys(p.support, q.support):
        uniq, counts = np.unique(keys, return_counts=True)
        odd_parts.append(uniq[counts & 1 == 1])
    if len(odd_parts) > 1:
        # parity of the total count is the XOR of the per-block parities
        uniq, counts = np.unique(np.concatenate(odd_parts), return_counts=True)
        keys = uniq[counts & 1 == 1]
    else:
        keys = odd_parts[0]
    return Gf2Laurent(PointSet._trusted(frame.unpack(keys), p.d))


def power(p: Gf2Laurent, n: int, max_pairs: int = MAX_PAIRS) -> Gf2Laurent:
    """``p ** n`` by square-and-multiply, squaring by exponent doubling."""
    if n < 1:
        raise ValueError("exponent must be >= 1")
    result = None
    base = p
    while True:
        if n & 1:
            result = base if result is None else mul(result, base, max_pairs)
        n >>= 1
        if not n:
            return result
        base = base.square()


def from_set(points: PointSet) -> Gf2Laurent:
    return Gf2Laurent(points)


def neighbor_parity_series(points: PointSet) -> Gf2Laurent:
    """``P_X * S``: supported exactly on points with an odd number of neighbours in X."""
    return mul(Gf2Laurent(points), laplace_symbol(points.d))
