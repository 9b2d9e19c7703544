"""Walks through supportive sets.

A set X is supportive when no cross meets it in a single arm point. So for
x in X and a unit vector e, the cross centered at x + e holds a second point
of X; ``step`` picks it in a fixed order. Repeating steps moves at least r
along e without drifting further than r sideways (``walk_to_distance``), and
chaining such walks with radii ``2^(j+2) - 2`` along a direction sequence
gives the Q-walks whose endpoints ``collision_census`` tabulates.

Direction indices m in 1..2d name eps_m = (-1)^(m+1) e_ceil(m/2), so
eps_1 = e_1, eps_2 = -e_1, eps_3 = e_2, ...
"""
from __future__ import annotations

import csv
import io
import itertools
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .errors import RegionTooSmall, SupportivenessBreach
from .lattice import Box, Point, PointSet, add, as_point, dot, format_point, manhattan, max_dist, scale, sub


def epsilon(m: int, d: int) -> Point:
    if not 1 <= m <= 2 * d:
        raise ValueError(f"direction index {m} outside 1..{2 * d}")
    v = [0] * d
    v[(m + 1) // 2 - 1] = 1 if m % 2 else -1
    return tuple(v)


def axis_of(m: int) -> int:
    """1-based axis named by direction index ``m``."""
    return (m + 1) // 2


def opposing(b: int, c: int) -> bool:
    return b != c and axis_of(b) == axis_of(c)


def radius_schedule(j: int) -> int:
    """r_j = 2^(j+2) - 2."""
    return 2 ** (j + 2) - 2


def is_k_good(entries: Sequence[int], k: int) -> bool:
    axes = [axis_of(a) for a in entries]
    for i in range(len(axes)):
        for j in range(i + 1, min(len(axes), i + k)):
            if axes[i] == axes[j]:
                return False
    return True


@dataclass(frozen=True)
class GoodSequence:
    entries: tuple[int, ...]
    k: int

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(int(a) for a in self.entries))
        if any(a < 1 for a in self.entries):
            raise ValueError("direction indices start at 1")
        if not is_k_good(self.entries, self.k):
            raise ValueError(f"{self.entries} is not {self.k}-good")

    def __len__(self) -> int:
        return len(self.entries)

    def __str__(self) -> str:
        return "-".join(map(str, self.entries))


def good_sequences(d: int, n: int, k: int) -> Iterator[GoodSequence]:
    """All k-good sequences of length n over 1..2d, in lexicographic order."""

    def extend(prefix: list[int]) -> Iterator[tuple[int, ...]]:
        if len(prefix) == n:
            yield tuple(prefix)
            return
        recent = {axis_of(a) for a in prefix[max(0, len(prefix) - k + 1) :]} if k > 1 else set()
        for m in range(1, 2 * d + 1):
            if axis_of(m) not in recent:
                prefix.append(m)
                yield from extend(prefix)
                prefix.pop()

    for entries in extend([]):
        yield GoodSequence(entries, k)


def count_good_sequences(d: int, n: int, k: int, limit: int | None = None) -> int:
    """Number of k-good sequences, counted up to ``limit`` when given."""
    total = 0
    for _ in good_sequences(d, n, k):
        total += 1
        if limit is not None and total > limit:
            break
    return total


def sample_good_sequences(d: int, n: int, k: int, count: int, seed: int, max_tries: int | None = None) -> list[GoodSequence]:
    """Distinct k-good sequences drawn by seeded rejection sampling, in draw order."""
    rng = np.random.default_rng(seed)
    max_tries = max_tries if max_tries is not None else 1000 * count + 1000
    seen: dict[tuple[int, ...], None] = {}
    for _ in range(max_tries):
        if len(seen) >= count:
            break
        entries = tuple(int(a) for a in rng.integers(1, 2 * d + 1, size=n))
        if is_k_good(entries, k):
            seen.setdefault(entries)
    return [GoodSequence(e, k) for e in seen]


def _unit_axis(e: Sequence[int]) -> int:
    nz = [i for i, c in enumerate(e) if c]
    if len(nz) != 1 or abs(e[nz[0]]) != 1:
        raise ValueError(f"{tuple(e)} is not a unit vector")
    return nz[0]


def _check_visible(center: Point, region: Box | None) -> None:
    if region is not None and max_dist(center, region.center) > region.radius - 1:
        raise RegionTooSmall(f"cross at {center} leaves {region}")


def step(x_set: PointSet, x: Sequence[int], e: Sequence[int], region: Box | None = None) -> Point:
    """A point of ``x_set ∩ cross(x + e)`` other than ``x``.

    Candidates are tried in the order x+2e, x+e, then x+e+eps_m for increasing
    m, skipping the axis of e. ``region`` is where ``x_set`` is known to be
    complete; crosses reaching outside it raise :class:`RegionTooSmall`.
    """
    x, e = as_point(x), as_point(e)
    axis = _unit_axis(e)
    if x not in x_set:
        raise ValueError(f"{x} is not in the set")
    center = add(x, e)
    _check_visible(center, region)
    d = len(x)
    candidates = [add(center, e), center]
    candidates += [add(center, epsilon(m, d)) for m in range(1, 2 * d + 1) if axis_of(m) - 1 != axis]
    for c in candidates:
        if c in x_set:
            return c
    raise SupportivenessBreach(center)


def walk_path(x_set: PointSet, x: Sequence[int], e: Sequence[int], r: int, region: Box | None = None) -> list[Point]:
    """Points visited by repeated steps until the e-component reaches r or r + 1."""
    if r < 1:
        raise ValueError("walk distance must be >= 1")
    x, e = as_point(x), as_point(e)
    path = [x]
    while dot(sub(path[-1], x), e) < r:
        path.append(step(x_set, path[-1], e, region))
    return path


def walk_to_distance(
    x_set: PointSet, x: Sequence[int], e: Sequence[int], r: int, region: Box | None = None
) -> tuple[Point, Point]:
    """Return ``(y, A)`` with ``(y - x, e)`` in {r, r+1} and ``A = y - x - r e``."""
    x = as_point(x)
    y = walk_path(x_set, x, e, r, region)[-1]
    return y, sub(sub(y, x), scale(e, r))


@dataclass(frozen=True)
class WalkRecord:
    start: Point
    sequence: GoodSequence
    radii: tuple[int, ...]
    waypoints: tuple[Point, ...]
    psi: int

    @property
    def endpoint(self) -> Point:
        return self.waypoints[-1]


def q_walk(x_set: PointSet, x: Sequence[int], seq: GoodSequence | Sequence[int], region: Box | None = None, k: int = 1) -> WalkRecord:
    """Chain ``walk_to_distance`` along eps_{a_0}, eps_{a_1}, ... with radii r_n, r_{n-1}, ..., r_1.

    The psi statistic is ``(Q_n - x, eps_{a_0})``, taken as 0 for the empty sequence.
    """
    x = as_point(x)
    if not isinstance(seq, GoodSequence):
        seq = GoodSequence(tuple(seq), k)
    d, n = len(x), len(seq)
    radii = tuple(radius_schedule(n - m) for m in range(n))
    if region is not None and n and max_dist(x, region.center) + 8 * radii[0] > region.radius:
        raise RegionTooSmall(f"q-walk of length {n} from {x} needs radius {8 * radii[0]} around it")
    points = [x]
    for a, r in zip(seq.entries, radii):
        y, _ = walk_to_distance(x_set, points[-1], epsilon(a, d), r, region)
        points.append(y)
    psi = dot(sub(points[-1], x), epsilon(seq.entries[0], d)) if n else 0
    return WalkRecord(x, seq, radii, tuple(points), psi)


@dataclass
class Census:
    start: Point
    n: int
    k: int
    records: list[WalkRecord]
    exhaustive: bool
    seed: int
    classes: dict[Point, list[WalkRecord]] = field(default_factory=dict)
    colliding_pairs: list[tuple[WalkRecord, WalkRecord]] = field(default_factory=list)
    opposing_violations: list[tuple[WalkRecord, WalkRecord]] = field(default_factory=list)
    class_psi_sums: dict[Point, int] = field(default_factory=dict)

    @property
    def distinct(self) -> int:
        return len(self.classes)

    @property
    def max_multiplicity(self) -> int:
        return max((len(v) for v in self.classes.values()), default=0)

    @property
    def psi_bound(self) -> int:
        return 4 * radius_schedule(self.n)

    @property
    def psi_bound_ok(self) -> bool:
        return all(s <= self.psi_bound for s in self.class_psi_sums.values())

    def summary(self) -> str:
        return f"# sequences={len(self.records)} distinct={self.distinct} max_multiplicity={self.max_multiplicity}"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["sequence", "endpoint", "psi"])
        for rec in self.records:
            w.writerow([str(rec.sequence), format_point(rec.endpoint), rec.psi])
        buf.write(self.summary() + "\n")
        worst = max(self.class_psi_sums.values(), default=0)
        buf.write(
            f"# opposing_start_collisions={len(self.opposing_violations)} "
            f"max_class_psi_sum={worst} psi_bound={self.psi_bound} "
            f"exhaustive={str(self.exhaustive).lower()} seed={self.seed}\n"
        )
        return buf.getvalue()


def _first_difference(a: Sequence[int], b: Sequence[int]) -> int | None:
    for i, (p, q) in enumerate(zip(a, b)):
        if p != q:
            return i
    return None


def collision_census(
    x_set: PointSet,
    x: Sequence[int],
    n: int,
    k: int,
    sample_budget: int = 4096,
    seed: int = 0,
    region: Box | None = None,
    threads: int = 1,
) -> Census:
    """Run q-walks for k-good sequences and tabulate coinciding endpoints.

    All sequences are used when there are at most ``sample_budget`` of them,
    otherwise ``sample_budget`` distinct ones are sampled with ``seed``.
    Pairs of sequences reaching the same endpoint whose first differing
    entries are opposing are collected in ``opposing_violations`` (there must
    be none). For every endpoint, the |psi| values of one walk per distinct
    starting index are summed into ``class_psi_sums``.
    """
    x = as_point(x)
    d = len(x)
    total = count_good_sequences(d, n, k, limit=sample_budget)
    exhaustive = total <= sample_budget
    if exhaustive:
        seqs = list(good_sequences(d, n, k))
    else:
        seqs = sample_good_sequences(d, n, k, sample_budget, seed)

    def run(s: GoodSequence) -> WalkRecord:
        return q_walk(x_set, x, s, region)

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            records = list(pool.map(run, seqs))
    else:
        records = [run(s) for s in seqs]
    records.sort(key=lambda rec: (rec.endpoint, rec.sequence.entries))
    census = Census(x, n, k, records, exhaustive, seed)
    groups: dict[Point, list[WalkRecord]] = defaultdict(list)
    for rec in records:
        groups[rec.endpoint].append(rec)
    census.classes = dict(groups)
    for end, members in census.classes.items():
        for a, b in itertools.combinations(members, 2):
            census.colliding_pairs.append((a, b))
            i = _first_difference(a.sequence.entries, b.sequence.entries)
            if i is not None and opposing(a.sequence.entries[i], b.sequence.entries[i]):
                census.opposing_violations.append((a, b))
        by_start: dict[int, int] = {}
        for rec in members:
            by_start.setdefault(rec.sequence.entries[0] if n else 0, abs(rec.psi))
        census.class_psi_sums[end] = sum(by_start.values())
    return census


def walk_trial(x_set: PointSet, x: Sequence[int], e: Sequence[int], r: int, region: Box | None = None) -> dict:
    """One checked ``walk_to_distance`` run with every contract evaluated."""
    x, e = as_point(x), as_point(e)
    path = walk_path(x_set, x, e, r, region)
    y = path[-1]
    a = sub(sub(y, x), scale(e, r))
    target = add(x, scale(e, r))
    comps = [dot(sub(p, x), e) for p in path]
    dists = [manhattan(p, target) for p in path]
    monotone = all(dists[i + 1] <= dists[i] for i in range(len(path) - 1) if comps[i] < r)
    advances = all(comps[i + 1] - comps[i] in (1, 2) for i in range(len(path) - 1))
    checks = {
        "reach": comps[-1] in (r, r + 1),
        "near": manhattan(y, target) <= r,
        "a_along_e": dot(a, e) in (0, 1),
        "a_norm": manhattan(a, (0,) * len(a)) <= r,
        "in_set": all(p in x_set for p in path),
        "monotone": monotone,
        "advances": advances,
        "steps": len(path) - 1 <= r,
    }
    return {"x": x, "e": e, "r": r, "y": y, "A": a, "steps": len(path) - 1, "checks": checks, "ok": all(checks.values())}


def walk_trials(x_set: PointSet, region: Box, trials: int, seed: int, r_max: int) -> list[dict]:
    """Seeded random ``(x, e, r)`` trials of :func:`walk_trial`.

    ``r`` is uniform in ``1..min(r_max, R // 4)`` and ``x`` is drawn from the
    points of the set within ``R - 3r`` of the region center, so every walk has
    a radius-3r margin inside the region.
    """
    rng = np.random.default_rng(seed)
    d = x_set.d
    cap = min(r_max, region.radius // 4)
    if cap < 1:
        raise RegionTooSmall(f"{region} is too small for any trial")
    norms = x_set.max_norms(region.center)
    out = []
    for _ in range(trials):
        r = int(rng.integers(1, cap + 1))
        pool = np.flatnonzero(norms <= region.radius - 3 * r)
        if len(pool) == 0:
            raise RegionTooSmall(f"no start point has a {3 * r} margin inside {region}")
        x = tuple(int(c) for c in x_set.array[pool[int(rng.integers(len(pool)))]])
        e = epsilon(int(rng.integers(1, 2 * d + 1)), d)
        out.append(walk_trial(x_set, x, e, r, region))
    return out
