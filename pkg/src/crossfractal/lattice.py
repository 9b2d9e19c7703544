"""Points of Z^d, metrics, crosses, boxes and finite point sets.

A point is a plain tuple of Python ints. A :class:`PointSet` stores its
points as a sorted ``(n, d)`` int64 array, so iteration and serialization are
always in lexicographic order no matter how the set was built.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import CoordinateOverflow, DimensionMismatch

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1

Point = tuple[int, ...]


def as_point(p: Iterable[int]) -> Point:
    pt = tuple(int(c) for c in p)
    if not pt:
        raise ValueError("a lattice point needs at least one coordinate")
    for c in pt:
        if c < INT64_MIN or c > INT64_MAX:
            raise CoordinateOverflow(f"coordinate {c} does not fit in int64")
    return pt


def _same_dim(a: Sequence[int], b: Sequence[int]) -> None:
    if len(a) != len(b):
        raise DimensionMismatch(f"dimension {len(a)} != {len(b)}")


def manhattan(a: Sequence[int], b: Sequence[int]) -> int:
    _same_dim(a, b)
    return sum(abs(int(x) - int(y)) for x, y in zip(a, b))


def max_dist(a: Sequence[int], b: Sequence[int]) -> int:
    _same_dim(a, b)
    return max(abs(int(x) - int(y)) for x, y in zip(a, b))


def add(a: Sequence[int], b: Sequence[int]) -> Point:
    _same_dim(a, b)
    return as_point(int(x) + int(y) for x, y in zip(a, b))


def sub(a: Sequence[int], b: Sequence[int]) -> Point:
    _same_dim(a, b)
    return as_point(int(x) - int(y) for x, y in zip(a, b))


def scale(a: Sequence[int], c: int) -> Point:
    return as_point(int(x) * c for x in a)


def dot(a: Sequence[int], b: Sequence[int]) -> int:
    _same_dim(a, b)
    return sum(int(x) * int(y) for x, y in zip(a, b))


def origin(d: int) -> Point:
    if d < 1:
        raise ValueError("dimension must be >= 1")
    return (0,) * d


def unit(d: int, axis: int, sign: int = 1) -> Point:
    """``sign * e_axis`` with a 0-based axis."""
    v = [0] * d
    v[axis] = sign
    return tuple(v)


def unit_vectors(d: int) -> np.ndarray:
    """The 2d unit vectors ordered e_1, -e_1, e_2, -e_2, ..."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    out = np.zeros((2 * d, d), dtype=np.int64)
    for i in range(d):
        out[2 * i, i] = 1
        out[2 * i + 1, i] = -1
    return out


def _check_range(lo: int, hi: int) -> None:
    if lo < INT64_MIN or hi > INT64_MAX:
        raise CoordinateOverflow(f"coordinates in [{lo}, {hi}] exceed int64")


@dataclass(frozen=True)
class Box:
    """Max-metric ball ``{p : max_dist(p, center) <= radius}``."""

    center: Point
    radius: int

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        r = int(self.radius)
        if r < 0:
            raise ValueError("box radius must be nonnegative")
        object.__setattr__(self, "radius", r)
        c = self.center
        _check_range(min(c) - r, max(c) + r)

    @classmethod
    def cube(cls, d: int, radius: int) -> "Box":
        return cls(origin(d), radius)

    @property
    def d(self) -> int:
        return len(self.center)

    @property
    def side(self) -> int:
        return 2 * self.radius + 1

    def __len__(self) -> int:
        return self.side**self.d

    def contains(self, p: Sequence[int]) -> bool:
        return max_dist(p, self.center) <= self.radius

    __contains__ = contains

    def interior(self) -> "Box":
        """Points whose whole cross stays inside the box."""
        return self.shrink(1)

    def shrink(self, by: int) -> "Box":
        if by > self.radius:
            raise ValueError(f"cannot shrink radius {self.radius} box by {by}")
        return Box(self.center, self.radius - by)

    def mask(self, pts: np.ndarray) -> np.ndarray:
        """Boolean row mask of ``pts`` lying in the box."""
        if len(pts) == 0:
            return np.zeros(0, dtype=bool)
        c = np.asarray(self.center, dtype=np.int64)
        return (np.abs(pts - c) <= self.radius).all(axis=1)

    def points(self) -> "PointSet":
        axes = [np.arange(c - self.radius, c + self.radius + 1, dtype=np.int64) for c in self.center]
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, self.d)
        return PointSet._trusted(grid, self.d)

    def translate(self, v: Sequence[int]) -> "Box":
        return Box(add(self.center, v), self.radius)

    def __str__(self) -> str:
        return f"Box(center={format_point(self.center)}, radius={self.radius})"


class _Frame:
    """Mixed-radix packing of points inside a bounding box into int64 keys.

    Key order equals lexicographic order of the points.
    """

    __slots__ = ("lo", "hi", "spans", "strides")

    def __init__(self, lo: Sequence[int], spans: Sequence[int], strides: Sequence[int]):
        self.lo = np.asarray(lo, dtype=np.int64)
        self.hi = np.asarray([l + s - 1 for l, s in zip(lo, spans)], dtype=np.int64)
        self.spans = np.asarray(spans, dtype=np.int64)
        self.strides = np.asarray(strides, dtype=np.int64)

    @classmethod
    def for_bounds(cls, lo: Sequence[int], hi: Sequence[int]) -> "_Frame | None":
        lo = [int(v) for v in lo]
        spans = [int(h) - l + 1 for l, h in zip(lo, hi)]
        strides = [1] * len(spans)
        for i in range(len(spans) - 2, -1, -1):
            strides[i] = strides[i + 1] * spans[i + 1]
        if strides[0] * spans[0] > INT64_MAX:
            return None
        return cls(lo, spans, strides)

    def pack(self, pts: np.ndarray) -> np.ndarray:
        return ((pts - self.lo) * self.strides).sum(axis=1, dtype=np.int64)

    def unpack(self, keys: np.ndarray) -> np.ndarray:
        out = np.empty((len(keys), len(self.lo)), dtype=np.int64)
        rem = keys.copy()
        for i, s in enumerate(self.strides):
            out[:, i], rem = np.divmod(rem, s)
        out += self.lo
        return out

    def inside(self, pts: np.ndarray) -> np.ndarray:
        return ((pts >= self.lo) & (pts <= self.hi)).all(axis=1)


def _bounds(pts: np.ndarray) -> tuple[list[int], list[int]]:
    return [int(v) for v in pts.min(axis=0)], [int(v) for v in pts.max(axis=0)]


def _canonical(pts: np.ndarray) -> np.ndarray:
    if len(pts) == 0:
        return pts
    frame = _Frame.for_bounds(*_bounds(pts))
    if frame is None:
        return np.unique(pts, axis=0)
    return frame.unpack(np.unique(frame.pack(pts)))


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=np.int64)
    arr.flags.writeable = False
    return arr


class PointSet:
    """Immutable finite subset of Z^d with exact membership."""

    __slots__ = ("_pts", "_d", "_frame", "_keys", "_pyset")

    def __init__(self, points: Iterable[Sequence[int]] | np.ndarray = (), d: int | None = None):
        if isinstance(points, np.ndarray):
            arr = points
        else:
            rows = [as_point(p) for p in points]
            if rows:
                arr = np.array(rows, dtype=object)
                lo, hi = min(min(r) for r in rows), max(max(r) for r in rows)
                _check_range(lo, hi)
                arr = arr.astype(np.int64)
            else:
                arr = np.zeros((0, d or 0), dtype=np.int64)
        if arr.ndim == 1 and len(arr) == 0:
            arr = arr.reshape(0, d or 0)
        if arr.ndim != 2:
            raise ValueError("points must form an (n, d) array")
        if len(arr) == 0 and d is not None:
            arr = arr.reshape(0, d)
        if d is None:
            d = arr.shape[1]
        if d < 1:
            raise ValueError("dimension must be >= 1")
        if arr.shape[1] != d:
            raise DimensionMismatch(f"points have dimension {arr.shape[1]}, expected {d}")
        self._init(_canonical(np.asarray(arr, dtype=np.int64)), d)

    def _init(self, arr: np.ndarray, d: int) -> None:
        self._pts = _frozen(arr)
        self._d = d
        self._frame = None
        self._keys = None
        self._pyset = None

    @classmethod
    def _trusted(cls, arr: np.ndarray, d: int) -> "PointSet":
        """Wrap an array that is already sorted and duplicate free."""
        obj = cls.__new__(cls)
        obj._init(arr.reshape(-1, d), d)
        return obj

    @classmethod
    def empty(cls, d: int) -> "PointSet":
        return cls._trusted(np.zeros((0, d), dtype=np.int64), d)

    @property
    def d(self) -> int:
        return self._d

    @property
    def array(self) -> np.ndarray:
        """Read-only ``(n, d)`` view in lexicographic order."""
        return self._pts

    def __len__(self) -> int:
        return len(self._pts)

    def __iter__(self) -> Iterator[Point]:
        for row in self._pts.tolist():
            yield tuple(row)

    def __bool__(self) -> bool:
        return len(self._pts) > 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PointSet):
            return NotImplemented
        return self._d == other._d and np.array_equal(self._pts, other._pts)

    def __hash__(self) -> int:
        return hash((self._d, self._pts.tobytes()))

    def __repr__(self) -> str:
        head = ", ".join(format_point(p) for p in self._pts[:6].tolist())
        more = ", ..." if len(self) > 6 else ""
        return f"PointSet(d={self._d}, n={len(self)}, [{head}{more}])"

    # membership

    def _ensure_index(self) -> None:
        if self._keys is not None or self._pyset is not None or len(self._pts) == 0:
            return
        frame = _Frame.for_bounds(*_bounds(self._pts))
        if frame is None:
            self._pyset = set(self)
        else:
            self._frame = frame
            self._keys = frame.pack(self._pts)

    def contains_many(self, pts: np.ndarray) -> np.ndarray:
        """Row-wise membership for an ``(m, d)`` int64 array."""
        pts = np.asarray(pts, dtype=np.int64).reshape(-1, self._d)
        out = np.zeros(len(pts), dtype=bool)
        if len(self._pts) == 0 or len(pts) == 0:
            return out
        self._ensure_index()
        if self._pyset is not None:
            return np.array([tuple(r) in self._pyset for r in pts.tolist()], dtype=bool)
        inside = self._frame.inside(pts)
        keys = self._frame.pack(pts[inside])
        pos = np.searchsorted(self._keys, keys)
        pos[pos == len(self._keys)] = 0
        out[inside] = self._keys[pos] == keys
        return out

    def __contains__(self, p: Sequence[int]) -> bool:
        if len(p) != self._d:
            raise DimensionMismatch(f"point of dimension {len(p)} queried in d={self._d} set")
        if len(self._pts) == 0:
            return False
        self._ensure_index()
        if self._pyset is not None:
            return tuple(int(c) for c in p) in self._pyset
        rel = [int(c) - int(l) for c, l in zip(p, self._frame.lo)]
        if any(r < 0 or r >= s for r, s in zip(rel, self._frame.spans)):
            return False
        key = sum(r * int(s) for r, s in zip(rel, self._frame.strides))
        i = int(np.searchsorted(self._keys, key))
        return i < len(self._keys) and int(self._keys[i]) == key

    # set algebra

    def _check(self, other: "PointSet") -> None:
        if self._d != other._d:
            raise DimensionMismatch(f"dimension {self._d} != {other._d}")

    def select(self, mask: np.ndarray) -> "PointSet":
        return PointSet._trusted(self._pts[mask], self._d)

    def union(self, other: "PointSet") -> "PointSet":
        self._check(other)
        return PointSet(np.concatenate([self._pts, other._pts]), self._d)

    def intersection(self, other: "PointSet") -> "PointSet":
        self._check(other)
        return self.select(other.contains_many(self._pts))

    def difference(self, other: "PointSet") -> "PointSet":
        self._check(other)
        return self.select(~other.contains_many(self._pts))

    def symmetric_difference(self, other: "PointSet") -> "PointSet":
        return self.difference(other).union(other.difference(self))

    def isdisjoint(self, other: "PointSet") -> bool:
        self._check(other)
        return not other.contains_many(self._pts).any()

    def issubset(self, other: "PointSet") -> bool:
        self._check(other)
        return bool(other.contains_many(self._pts).all())

    __or__ = union
    __and__ = intersection
    __sub__ = difference
    __xor__ = symmetric_difference
    __le__ = issubset

    def clip(self, box: Box) -> "PointSet":
        if box.d != self._d:
            raise DimensionMismatch(f"box dimension {box.d} != {self._d}")
        return self.select(box.mask(self._pts))

    def translate(self, v: Sequence[int]) -> "PointSet":
        v = as_point(v)
        _same_dim(v, (0,) * self._d)
        if len(self._pts) == 0:
            return self
        lo, hi = _bounds(self._pts)
        _check_range(min(a + b for a, b in zip(lo, v)), max(a + b for a, b in zip(hi, v)))
        return PointSet._trusted(self._pts + np.asarray(v, dtype=np.int64), self._d)

    def max_norms(self, center: Sequence[int] | None = None) -> np.ndarray:
        """Max-metric distance of every point to ``center`` (default origin)."""
        if len(self._pts) == 0:
            return np.zeros(0, dtype=np.int64)
        c = np.zeros(self._d, dtype=np.int64) if center is None else np.asarray(center, dtype=np.int64)
        return np.abs(self._pts - c).max(axis=1)


def _offset_set(x: Point, offsets: np.ndarray) -> PointSet:
    _check_range(min(x) - 1, max(x) + 1)
    return PointSet(offsets + np.asarray(x, dtype=np.int64), len(x))


def cross(x: Sequence[int]) -> PointSet:
    """The 2d+1 points ``{x} ∪ {x ± e_i}``."""
    x = as_point(x)
    d = len(x)
    return _offset_set(x, np.vstack([np.zeros((1, d), dtype=np.int64), unit_vectors(d)]))


def neighbors(x: Sequence[int]) -> PointSet:
    """The 2d points ``{x ± e_i}``."""
    x = as_point(x)
    return _offset_set(x, unit_vectors(len(x)))


def _sum_frame(a: PointSet, b: PointSet) -> tuple[_Frame | None, np.ndarray, np.ndarray]:
    """Common packing frame for ``a + b``; returns (frame, keys_a, keys_b)."""
    alo, ahi = _bounds(a.array)
    blo, bhi = _bounds(b.array)
    lo = [x + y for x, y in zip(alo, blo)]
    hi = [x + y for x, y in zip(ahi, bhi)]
    _check_range(min(lo), max(hi))
    frame = _Frame.for_bounds(lo, hi)
    if frame is None:
        return None, a.array, b.array
    # key(a + b) = key_a(a) + key_b(b) when each side is packed against its own low corner
    ka = ((a.array - np.asarray(alo, dtype=np.int64)) * frame.strides).sum(axis=1, dtype=np.int64)
    kb = ((b.array - np.asarray(blo, dtype=np.int64)) * frame.strides).sum(axis=1, dtype=np.int64)
    return frame, ka, kb


def sum_keys(a: PointSet, b: PointSet, chunk: int = 1 << 22):
    """Yield (frame, key block) for the multiset ``{a + b}``, blockwise.

    Used by both the sumset and the GF(2) product, which differ only in how
    they reduce duplicate keys.
    """
    a._check(b)
    if len(a) < len(b):
        a, b = b, a
    frame, ka, kb = _sum_frame(a, b)
    if frame is None:
        raise CoordinateOverflow("sum bounding box is too large to pack into int64 keys")
    step = max(1, chunk // max(1, len(ka)))
    for s in range(0, len(kb), step):
        yield frame, (ka[None, :] + kb[s : s + step, None]).ravel()


def minkowski_sum(a: PointSet, b: PointSet) -> PointSet:
    """``{x + y : x in a, y in b}``."""
    a._check(b)
    if len(a) == 0 or len(b) == 0:
        return PointSet.empty(a.d)
    frame = None
    parts = []
    for frame, keys in sum_keys(a, b):
        parts.append(np.unique(keys))
    keys = np.unique(np.concatenate(parts)) if len(parts) > 1 else parts[0]
    return PointSet._trusted(frame.unpack(keys), a.d)


def dilate(a: PointSet, c: int) -> PointSet:
    """``{c * x : x in a}``."""
    c = int(c)
    if c == 0:
        raise ValueError("dilation factor must be nonzero")
    if len(a) == 0:
        return a
    lo, hi = _bounds(a.array)
    ends = [v * c for v in lo + hi]
    _check_range(min(ends), max(ends))
    arr = a.array * np.int64(c)
    if c < 0:
        arr = arr[::-1]
    return PointSet._trusted(arr, a.d)


def format_point(p: Iterable[int]) -> str:
    return ",".join(str(int(c)) for c in p)


def parse_point(text: str) -> Point:
    return as_point(int(t) for t in text.strip().split(","))
