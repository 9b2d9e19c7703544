"""Plain-text point set files.

Format::

    # d=<d> n=<count>
    3,0,-1
    ...

Points follow in lexicographic order, one per line, no spaces.
"""
from __future__ import annotations

import io
import re
from pathlib import Path
from typing import TextIO

import numpy as np

from .lattice import PointSet

_HEADER = re.compile(r"^#\s*d=(\d+)\s+n=(\d+)\s*$")


def point_lines(ps: PointSet) -> str:
    """Body lines (each newline-terminated) for the points of ``ps``."""
    if len(ps) == 0:
        return ""
    rows = ps.array.astype(str)
    if ps.d == 1:
        return "\n".join(rows[:, 0]) + "\n"
    cols = rows[:, 0]
    for j in range(1, ps.d):
        cols = np.char.add(np.char.add(cols, ","), rows[:, j])
    return "\n".join(cols.tolist()) + "\n"


def format_set(ps: PointSet) -> str:
    return f"# d={ps.d} n={len(ps)}\n" + point_lines(ps)


def write_set(ps: PointSet, dest: str | Path | TextIO) -> None:
    text = format_set(ps)
    if isinstance(dest, (str, Path)):
        Path(dest).write_text(text)
    else:
        dest.write(text)


def parse_set(text: str) -> PointSet:
    lines = text.splitlines()
    if not lines:
        raise ValueError("empty set file")
    m = _HEADER.match(lines[0])
    if not m:
        raise ValueError(f"bad set file header: {lines[0]!r}")
    d, n = int(m.group(1)), int(m.group(2))
    body = [ln for ln in lines[1:] if ln.strip() and not ln.startswith("#")]
    if len(body) != n:
        raise ValueError(f"header announces {n} points, found {len(body)}")
    if n == 0:
        return PointSet.empty(d)
    arr = np.loadtxt(io.StringIO("\n".join(body)), delimiter=",", dtype=np.int64, ndmin=2)
    if arr.shape[1] != d:
        raise ValueError(f"header announces d={d}, points have {arr.shape[1]} coordinates")
    ps = PointSet(arr, d)
    if len(ps) != n:
        raise ValueError("set file contains duplicate points")
    return ps


def read_set(src: str | Path | TextIO) -> PointSet:
    if isinstance(src, (str, Path)):
        return parse_set(Path(src).read_text())
    return parse_set(src.read())
