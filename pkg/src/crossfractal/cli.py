"""Command line entry point.

Exit codes: 0 success (no violations), 1 violations found, 2 usage or budget
errors. Data goes to ``--out`` or stdout; the reproducibility header and
other diagnostics go to stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .dimension import GENERATORS, count_in_boxes, fit_dimension, powers_of_two
from .errors import BudgetExceeded, CoordinateOverflow, DimensionMismatch, RegionTooSmall, SupportivenessBreach
from .fractal import MAX_LEVEL_SIZE, build_xinf_box, build_xk, build_xplus_box
from .gf2 import MAX_PAIRS, laplace_symbol, power
from .lattice import Box, PointSet, format_point, parse_point, unit
from .minweight import MAX_SOLUTIONS, InfeasibleSystem, min_support
from .setfile import format_set, read_set
from .verify import Predicate, violations
from .walk import collision_census, walk_trials, radius_schedule


class UsageError(Exception):
    pass


def _radii(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad radii list {text!r}") from exc


def _point(text: str):
    try:
        return parse_point(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad point {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, help="write data here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1, help="advisory worker count")
    common.add_argument(
        "--budget", type=int,
        help="size cap: level size (generate, dimension), product pairs (poly), "
        "solution count (minweight), sampled sequences (walk census)",
    )

    p = argparse.ArgumentParser(prog="crossfractal", description=__doc__.splitlines()[0], allow_abbrev=False)
    p.add_argument("--version", action="version", version=f"crossfractal {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def cmd(parent, name, **kw):
        return parent.add_parser(name, parents=[common], allow_abbrev=False, **kw)

    gen = sub.add_parser("generate", help="build X_k, X_inf or X_plus").add_subparsers(dest="kind", required=True)
    g = cmd(gen, "xk", help="the level-k sumset")
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--k", type=int, required=True)
    for name in ("xinf", "xplus"):
        g = cmd(gen, name, help=f"{name} truncated to [-r, r]^d")
        g.add_argument("--d", type=int, required=True)
        g.add_argument("--radius", type=int, required=True)

    ver = sub.add_parser("verify", help="check a set file against a predicate").add_subparsers(dest="predicate", required=True)
    for pred in Predicate:
        v = cmd(ver, pred.value)
        v.add_argument("--in", dest="infile", type=Path, required=True)
        v.add_argument("--radius", type=int, required=True)
        v.add_argument("--center", type=_point, help="region center (default origin)")
        v.add_argument("--strategy", choices=("auto", "dense", "sparse"), default="auto")

    poly = sub.add_parser("poly", help="GF(2) Laplace symbol powers").add_subparsers(dest="action", required=True)
    s = cmd(poly, "spow", help="support of S^e, e = 2^k - 1 unless --exp is given")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--k", type=int)
    s.add_argument("--exp", type=int)
    c = cmd(poly, "check-xk", help="compare S^(2^k-1) with X_k and S^(2^k) with {±2^k e_i}")
    c.add_argument("--d", type=int, required=True)
    c.add_argument("--k", type=int, required=True)

    dim = cmd(sub, "dimension", help="box counts and log-log slope")
    dim.add_argument("--generator", choices=GENERATORS, default="xinf")
    dim.add_argument("--d", type=int)
    dim.add_argument("--k", type=int)
    dim.add_argument("--radii", type=_radii, default=powers_of_two(3, 10))
    dim.add_argument("--in", dest="infile", type=Path)

    mw = cmd(sub, "minweight", help="box-local minimum support weight")
    mw.add_argument("--d", type=int, required=True, help="lattice dimension n")
    mw.add_argument("--radius", type=int, required=True)

    walk = sub.add_parser("walk", help="supportive-set walks").add_subparsers(dest="action", required=True)
    w = cmd(walk, "lemma42", help="seeded random walk_to_distance trials with contract checks")
    w.add_argument("--d", type=int)
    w.add_argument("--radius", type=int, required=True, help="truncation radius of the set")
    w.add_argument("--in", dest="infile", type=Path, help="set file (default: X_inf truncation)")
    w.add_argument("--trials", type=int, default=100)
    w.add_argument("--max-level", type=int, default=6, help="walk distances up to r_level")
    w = cmd(walk, "census", help="endpoint census of q-walks over k-good sequences")
    w.add_argument("--d", type=int)
    w.add_argument("--radius", type=int, required=True, help="truncation radius of the set")
    w.add_argument("--in", dest="infile", type=Path, help="set file (default: X_inf truncation)")
    w.add_argument("--n", type=int, required=True)
    w.add_argument("--k", type=int, default=1)
    w.add_argument("--start", type=_point, help="start point (default e_1)")
    return p


def _emit(args, text: str) -> None:
    if args.out:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)


def _config(args) -> dict:
    cfg = {k: (str(v) if isinstance(v, Path) else v) for k, v in vars(args).items()}
    return {k: (list(v) if isinstance(v, tuple) else v) for k, v in sorted(cfg.items())}


def _need_d(args) -> int:
    if args.d is None or args.d < 1:
        raise UsageError("--d must be a positive integer")
    return args.d


def _load_or_xinf(args) -> tuple[PointSet, Box]:
    if args.infile:
        pts = read_set(args.infile)
    else:
        pts = build_xinf_box(_need_d(args), args.radius)
    return pts, Box.cube(pts.d, args.radius)


def run(args) -> int:
    if args.command == "generate":
        budget = args.budget or MAX_LEVEL_SIZE
        if args.kind == "xk":
            pts = build_xk(args.d, args.k, budget=budget).points
        elif args.kind == "xinf":
            pts = build_xinf_box(args.d, args.radius, budget=budget)
        else:
            pts = build_xplus_box(args.d, args.radius, budget=budget)
        _emit(args, format_set(pts))
        return 0

    if args.command == "verify":
        pts = read_set(args.infile)
        center = args.center or (0,) * pts.d
        report = violations(pts, Box(center, args.radius), args.predicate, args.strategy)
        _emit(args, report.serialize())
        print(report.header(), file=sys.stderr)
        return 0 if report.ok else 1

    if args.command == "poly":
        d = args.d
        pairs = args.budget or MAX_PAIRS
        if args.action == "spow":
            if args.exp is None and args.k is None:
                raise UsageError("poly spow needs --k or --exp")
            e = args.exp if args.exp is not None else 2**args.k - 1
            if e < 1:
                raise UsageError("exponent must be >= 1")
            _emit(args, format_set(power(laplace_symbol(d), e, pairs).support))
            return 0
        s = laplace_symbol(d)
        xk = build_xk(d, args.k).points
        odd = args.k == 0 or power(s, 2**args.k - 1, pairs).support == xk
        tops = PointSet([unit(d, i, sg * 2**args.k) for i in range(d) for sg in (1, -1)])
        frob = power(s, 2**args.k, pairs).support == tops
        _emit(
            args,
            f"check-xk d={d} k={args.k} xk_points={len(xk)} "
            f"spow_minus_one_equal={str(odd).lower()} spow_equal={str(frob).lower()}\n",
        )
        return 0 if odd and frob else 1

    if args.command == "dimension":
        d = args.d if args.generator == "file" else _need_d(args)
        series = count_in_boxes(
            args.generator, d, args.radii, k=args.k, source=args.infile,
            budget=args.budget or MAX_LEVEL_SIZE, threads=args.threads,
        )
        fit = fit_dimension(series) if len(series.radii) >= 3 and min(series.counts) >= 1 else None
        _emit(args, series.to_csv(fit))
        return 0

    if args.command == "minweight":
        res = min_support(args.d, args.radius, budget=args.budget or MAX_SOLUTIONS, threads=args.threads)
        note = "# box-local relaxation: interior constraints only, relaxed_min_weight <= N_n(r)"
        print(res.summary())
        print(note)
        if args.out:
            args.out.write_text(format_set(res.witness))
        else:
            sys.stdout.write(format_set(res.witness))
        return 0

    if args.command == "walk":
        pts, region = _load_or_xinf(args)
        if args.action == "lemma42":
            trials = walk_trials(pts, region, args.trials, args.seed, radius_schedule(args.max_level))
            buf = io.StringIO()
            out = csv.writer(buf, lineterminator="\n")
            out.writerow(["trial", "x", "e", "r", "y", "A", "steps", "ok"])
            for i, t in enumerate(trials):
                pts_ = [format_point(t[key]) for key in ("x", "e")]
                out.writerow([i, *pts_, t["r"], format_point(t["y"]), format_point(t["A"]), t["steps"], str(t["ok"]).lower()])
            bad = sum(not t["ok"] for t in trials)
            buf.write(f"# trials={len(trials)} failures={bad} seed={args.seed}\n")
            _emit(args, buf.getvalue())
            return 0 if bad == 0 else 1
        start = args.start or unit(pts.d, 0)
        census = collision_census(
            pts, start, args.n, args.k, sample_budget=args.budget or 4096,
            seed=args.seed, region=region, threads=args.threads,
        )
        _emit(args, census.to_csv())
        return 0 if not census.opposing_violations and census.psi_bound_ok else 1

    raise UsageError(f"unknown command {args.command}")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    print(f"# crossfractal {__version__} config={json.dumps(_config(args), sort_keys=True)}", file=sys.stderr)
    try:
        return run(args)
    except SupportivenessBreach as exc:
        print(f"violation: {exc}", file=sys.stderr)
        return 1
    except (UsageError, BudgetExceeded, RegionTooSmall, InfeasibleSystem, CoordinateOverflow,
            DimensionMismatch, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
