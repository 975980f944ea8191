"""Command-line interface.

Subcommands: gen, crossings, color, bundles, regularity, sametype, verify,
report. Every command is a deterministic function of its input files, flags,
and --seed (wall-clock timings in reports aside). Exit codes: 0 success,
2 verification failure, 3 pipeline failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import fileio
from .bundles import BundleParams, PipelineStageError, build_bundles
from .certificate import (
    VacuousInstanceError,
    max_feasible_constants,
    verify_conditions,
)
from .coloring import (
    bundle_coloring,
    coloring_stats,
    derandomized_coloring,
    random_coloring,
)
from .generate import DEFAULT_COORD_RANGE, KINDS, GeneratorSpec, generate
from .graph import crossing_set, density
from .regularity import random_balanced_partition, regular_box_partition
from .report import PIPELINES, ExperimentConfig, run_experiment, write_svg
from .sametype import VertexTuplePartition, same_type_check, same_type_refine

EXIT_OK = 0
EXIT_VERIFY = 2
EXIT_PIPELINE = 3


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r} ({exc})")


def _parse_parts(text: str) -> list[list[int]]:
    parts = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts.append([int(v) for v in chunk.replace(",", " ").split()])
    return parts


def _frac_obj(f: Fraction) -> dict:
    return {"num": f.numerator, "den": f.denominator, "decimal": float(f)}


def _emit(obj: dict, fmt: str) -> None:
    if fmt == "csv":
        import csv
        import io

        def flatten(v):
            if isinstance(v, dict):
                return v.get("decimal", json.dumps(v))
            if isinstance(v, (list, tuple)):
                return json.dumps(v)
            return v

        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(list(obj))
        writer.writerow([flatten(v) for v in obj.values()])
        print(buf.getvalue(), end="")
    else:
        print(json.dumps(obj, indent=2, default=str))


def cmd_gen(args) -> int:
    spec = GeneratorSpec(
        kind=args.kind,
        n=args.n,
        density=args.density,
        seed=args.seed,
        coordinate_range=args.coordinate_range,
    )
    g = generate(spec)
    out = Path(args.out) if args.out else Path(args.out_dir) / "graph.txt"
    out.parent.mkdir(parents=True, exist_ok=True)
    fileio.save_graph(g, out)
    _emit(
        {
            "kind": spec.kind,
            "n": g.n,
            "m": g.m,
            "density": _frac_obj(density(g)),
            "seed": spec.seed,
            "path": str(out),
        },
        args.format,
    )
    return EXIT_OK


def cmd_crossings(args) -> int:
    g = fileio.load_graph(args.graph)
    cs = crossing_set(g)
    if args.format == "svg":
        out = Path(args.out_dir) / "drawing.svg"
        out.parent.mkdir(parents=True, exist_ok=True)
        write_svg(g, None, out)
        print(str(out))
        return EXIT_OK
    obj = {"n": g.n, "m": g.m, "crossings": cs.count}
    if args.pairs:
        obj["pairs"] = sorted(cs.pairs)
    _emit(obj, args.format)
    return EXIT_OK


def cmd_color(args) -> int:
    g = fileio.load_graph(args.graph)
    cs = crossing_set(g)
    if args.strategy == "random":
        coloring = random_coloring(g, args.k, args.seed)
    elif args.strategy == "greedy":
        coloring = derandomized_coloring(g, args.k, crossing=cs)
    else:  # bundle
        if args.bundles:
            bundles = fileio.load_bundles(g, args.bundles)
        else:
            bundles = build_bundles(g, args.k, eps=args.eps, params=BundleParams(seed=args.seed))
        coloring = bundle_coloring(g, bundles, crossing=cs)
    stats = coloring_stats(g, coloring, crossing=cs)
    out = Path(args.out) if args.out else Path(args.out_dir) / "coloring.txt"
    out.parent.mkdir(parents=True, exist_ok=True)
    fileio.save_coloring(g, coloring, out)
    if args.format == "svg":
        svg = Path(args.out_dir) / "drawing.svg"
        write_svg(g, coloring, svg)
        print(str(svg))
        return EXIT_OK
    _emit(
        {
            "strategy": args.strategy,
            "k": coloring.k,
            "crs": stats.total,
            "mono": stats.mono,
            "hetero": stats.hetero,
            "ratio": _frac_obj(stats.ratio),
            "vacuous": stats.vacuous,
            "path": str(out),
        },
        args.format,
    )
    return EXIT_OK


def cmd_bundles(args) -> int:
    g = fileio.load_graph(args.graph)
    params = BundleParams(
        seed=args.seed,
        r_schedule=(args.r,) if args.r else None,
    )
    bundles = build_bundles(g, args.k, eps=args.eps, params=params)
    out = Path(args.out) if args.out else Path(args.out_dir) / "bundles.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    fileio.save_bundles(g, bundles, out)
    _emit(
        {
            "k": args.k,
            "bundles": [
                {"Y_size": len(b.Y), "Z_size": len(b.Z), "edges": len(b.edges)}
                for b in bundles
            ],
            "path": str(out),
        },
        args.format,
    )
    return EXIT_OK


def cmd_regularity(args) -> int:
    g = fileio.load_graph(args.graph)
    parts = random_balanced_partition(g, args.r, args.seed)
    partition = regular_box_partition(g, parts, args.eps, seed=args.seed)
    obj = {
        "r": args.r,
        "part_size": len(parts[0]),
        "epsilon": _frac_obj(partition.epsilon),
        "boxes": len(partition.boxes),
        "irregular_mass": partition.irregular_mass,
        "unknown_mass": partition.unknown_mass,
        "tuple_count": partition.tuple_count,
        "splits": partition.splits,
        "succeeded": partition.succeeded,
        "box_summary": [
            {
                "factor_sizes": [len(f) for f in b.factors],
                "regular": b.regular.value,
                "sampled": b.sampled,
            }
            for b in partition.boxes
        ],
    }
    _emit(obj, args.format)
    return EXIT_OK if partition.succeeded else EXIT_PIPELINE


def cmd_sametype(args) -> int:
    if args.graph:
        ps = fileio.load_graph(args.graph).vertices
    else:
        ps = fileio.load_point_set(args.points)
    partition = VertexTuplePartition(ps, tuple(tuple(p) for p in _parse_parts(args.parts)))
    if args.refine:
        res = same_type_refine(partition)
        _emit(
            {
                "parts": [list(p) for p in res.partition.parts],
                "beta": _frac_obj(res.beta),
                "cuts": res.cuts,
            },
            args.format,
        )
        return EXIT_OK
    res = same_type_check(partition)
    obj = {"same_type": res.ok}
    if res.witness is not None:
        obj["witness"] = {
            "parts": list(res.witness.part_triple),
            "first": list(res.witness.first),
            "second": list(res.witness.second),
        }
    _emit(obj, args.format)
    return EXIT_OK


def cmd_verify(args) -> int:
    g = fileio.load_graph(args.graph)
    try:
        bundles = fileio.load_bundles(g, args.bundles)
        c1, c2, c3 = max_feasible_constants(g, bundles)
        report = verify_conditions(g, bundles, c1, c2, c3)
    except ValueError as exc:
        _emit({"passed": False, "error": str(exc)}, args.format)
        return EXIT_VERIFY
    _emit(
        {
            "passed": report.passed,
            "side_fraction": _frac_obj(c1),
            "edge_fraction": _frac_obj(c2),
            "crossing_slack": _frac_obj(c3),
            "internal_crossings": list(report.internal_crossings),
            "conditions": [
                {"name": c.name, "passed": c.passed, "detail": c.detail}
                for c in report.checks
            ],
        },
        args.format,
    )
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_report(args) -> int:
    if args.graph:
        g = fileio.load_graph(args.graph)
        name = Path(args.graph).stem
    else:
        spec = GeneratorSpec(
            kind=args.kind, n=args.n, density=args.density, seed=args.seed
        )
        g = generate(spec)
        name = f"{spec.kind}-n{spec.n}-s{spec.seed}"
    config = ExperimentConfig(
        graph=g,
        pipeline=args.pipeline,
        k=args.k,
        seed=args.seed,
        instance_name=name,
        out_dir=args.out_dir,
        svg=args.format == "svg",
        figures=not args.no_figures,
        eps=args.eps,
    )
    report = run_experiment(config)
    print(json.dumps(report.to_json(), indent=2))
    return EXIT_OK if report.status in ("ok", "vacuous") else EXIT_PIPELINE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kcross",
        description="k-color the edges of dense geometric graphs so that the "
        "same-color crossing ratio provably drops below 1/k.",
    )
    parser.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    parser.add_argument("--out-dir", default=".", help="output directory (default .)")
    parser.add_argument(
        "--format", choices=("json", "csv", "svg"), default="json", help="output format"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a reproducible instance")
    p.add_argument("--kind", choices=KINDS, default="uniform-square")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--density", type=_fraction, default=Fraction(1))
    p.add_argument("--coordinate-range", type=int, default=DEFAULT_COORD_RANGE)
    p.add_argument("--out", help="graph file path (default <out-dir>/graph.txt)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("crossings", help="count crossing edge pairs exactly")
    p.add_argument("--graph", required=True)
    p.add_argument("--pairs", action="store_true", help="also list the pairs")
    p.set_defaults(func=cmd_crossings)

    p = sub.add_parser("color", help="color the edges with k colors")
    p.add_argument("--graph", required=True)
    p.add_argument("--strategy", choices=("random", "greedy", "bundle"), default="greedy")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--eps", type=_fraction, default=None)
    p.add_argument("--bundles", help="bundle JSON (strategy=bundle); built if omitted")
    p.add_argument("--out", help="coloring file path (default <out-dir>/coloring.txt)")
    p.set_defaults(func=cmd_color)

    p = sub.add_parser("bundles", help="find k pairwise-crossing edge bundles")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--r", type=int, default=None, help="parts in the balanced partition")
    p.add_argument("--eps", type=_fraction, default=None)
    p.add_argument("--out", help="bundle JSON path (default <out-dir>/bundles.json)")
    p.set_defaults(func=cmd_bundles)

    p = sub.add_parser("regularity", help="build a regular box partition")
    p.add_argument("--graph", required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--eps", type=_fraction, required=True)
    p.set_defaults(func=cmd_regularity)

    p = sub.add_parser("sametype", help="check or refine same-type transversals")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--points", help="point-set file")
    src.add_argument("--graph", help="graph file (uses its vertices)")
    p.add_argument("--parts", required=True, help="id groups, e.g. '0,1,2;3,4;5,6'")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--check", action="store_true")
    mode.add_argument("--refine", action="store_true")
    p.set_defaults(func=cmd_sametype)

    p = sub.add_parser("verify", help="verify bundle conditions exhaustively")
    p.add_argument("--graph", required=True)
    p.add_argument("--bundles", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("report", help="run a named pipeline and emit reports")
    p.add_argument("--graph", help="graph file; omit to generate")
    p.add_argument("--pipeline", choices=PIPELINES, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--kind", choices=KINDS, default="uniform-square")
    p.add_argument("--n", type=int, default=24)
    p.add_argument("--density", type=_fraction, default=Fraction(1))
    p.add_argument("--eps", type=_fraction, default=None)
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (PipelineStageError, VacuousInstanceError) as exc:
        print(f"pipeline failure: {exc}", file=sys.stderr)
        if isinstance(exc, PipelineStageError) and exc.attempts:
            for line in exc.attempts:
                print(f"  {line}", file=sys.stderr)
        return EXIT_PIPELINE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
