"""Command-line entry points for hull simplification and plane-list tools.

Subcommands
-----------
simplify  Reduce a point cloud's hull to a target plane (or vertex) budget.
stats     Audit a written plane list against the geometry it approximates.
overlap   Decide whether two plane-bounded solids share a point.
bench     Time hull construction and simplification over a directory.
kdop      Fit the 18-direction fixed-orientation bounding polytope.

Exit codes: 0 on success (for ``overlap``: the solids intersect), 2 for
usage and input errors, 3 when ``overlap`` finds the solids disjoint, and
4 for computational failures, which also emit one machine-readable JSON
line on stderr.  Result artifacts go to the requested paths; human
summaries go to stdout; timings and notes go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .baselines import NonContainment, kdop_fit, tightness
from .hull import DegenerateInput, RegionStatus, convex_hull, halfspace_intersection
from .io import ParseError, TooFewPoints, load_geometry, load_plane_list, write_outputs
from .lp import LpStatus, feasible_point
from .simplify import (
    SimplifiedHull,
    SimplifyConfig,
    TargetUnreachable,
    _simplify_outer,
    simplify,
)

_GEOMETRY_SUFFIXES = (".obj", ".off", ".ply")
_BENCH_COLUMNS = (
    "file",
    "n_points",
    "hull_faces",
    "hull_ms",
    "simplify_ms",
    "volume_ratio",
    "error",
)


def _u64(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hullpare",
        description="Conservative convex-hull simplification and plane-list tools.",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser(
        "simplify",
        help="reduce a hull to a target number of bounding planes",
        description=(
            "Build the convex hull of the input points and greedily remove "
            "bounding planes (outer mode) or vertices (inner mode) until the "
            "target count is reached, never crossing to the wrong side of "
            "the original hull."
        ),
    )
    p.add_argument("--input", required=True, help="geometry file (.obj/.off/.ply)")
    p.add_argument(
        "--faces",
        required=True,
        type=int,
        help="target plane count (outer mode) or vertex count (inner mode)",
    )
    p.add_argument(
        "--cost",
        choices=("volume", "area"),
        default="volume",
        help="greedy objective: added volume or added surface area (default: volume)",
    )
    p.add_argument(
        "--mode",
        choices=("outer", "inner"),
        default="outer",
        help="enclose the hull (outer) or fit inside it (inner); default: outer",
    )
    p.add_argument(
        "--keep-face",
        action="append",
        type=int,
        default=[],
        metavar="ID",
        help="plane id that must survive simplification (repeatable)",
    )
    p.add_argument(
        "--seed",
        type=_u64,
        default=None,
        help="random seed recorded with the run (the greedy itself is deterministic)",
    )
    p.add_argument(
        "--oracle-check",
        action="store_true",
        help="re-measure every step's cost with an independent global rebuild",
    )
    p.add_argument(
        "--triangulate-output",
        action="store_true",
        help="fan polygonal OBJ faces into triangles",
    )
    p.add_argument(
        "--out",
        required=True,
        metavar="BASE",
        help="output base path (writes BASE.planes.json and BASE.obj)",
    )
    p.set_defaults(func=_cmd_simplify)

    p = sub.add_parser(
        "stats",
        help="audit a plane list against the geometry it approximates",
        description=(
            "Check containment and report tightness metrics (volume/area "
            "ratios, exact Hausdorff distance) of a plane list relative to "
            "the convex hull of the input points."
        ),
    )
    p.add_argument("--input", required=True, help="geometry file (.obj/.off/.ply)")
    p.add_argument("--against", required=True, help="plane-list JSON to audit")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser(
        "overlap",
        help="decide whether two plane-bounded solids share a point",
        description=(
            "Feasibility test on the union of both plane lists: exit 0 with "
            "a witness point when the solids overlap, exit 3 when disjoint."
        ),
    )
    p.add_argument("--a", required=True, help="first plane-list JSON")
    p.add_argument("--b", required=True, help="second plane-list JSON")
    p.set_defaults(func=_cmd_overlap)

    p = sub.add_parser(
        "bench",
        help="time hull construction and simplification over a directory",
        description=(
            "Run outer volume-cost simplification on every geometry file in "
            "a directory and write one CSV row per file (or an error row). "
            "HULLPARE_THREADS bounds how many models run concurrently."
        ),
    )
    p.add_argument("--inputs", required=True, help="directory of geometry files")
    p.add_argument("--faces", required=True, type=int, help="target plane count")
    p.add_argument("--out", required=True, help="CSV path to write")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser(
        "kdop",
        help="fit the 18-direction fixed-orientation bounding polytope",
        description=(
            "Push a fixed 18-direction plane set (axes plus edge diagonals) "
            "to the farthest input point in each direction and write the "
            "resulting bounding solid."
        ),
    )
    p.add_argument("--input", required=True, help="geometry file (.obj/.off/.ply)")
    p.add_argument(
        "--k",
        type=int,
        default=18,
        help="number of directions (only 18 is supported; default: 18)",
    )
    p.add_argument(
        "--triangulate-output",
        action="store_true",
        help="fan polygonal OBJ faces into triangles",
    )
    p.add_argument(
        "--out",
        required=True,
        metavar="BASE",
        help="output base path (writes BASE.planes.json and BASE.obj)",
    )
    p.set_defaults(func=_cmd_kdop)

    return parser


# -- subcommands -----------------------------------------------------------


def _cmd_simplify(args) -> int:
    points = load_geometry(args.input)
    config = SimplifyConfig(
        target_faces=args.faces,
        cost_mode=args.cost,
        approx_mode=args.mode,
        constrained=tuple(args.keep_face),
        rng_seed=args.seed,
        exact_cost_check=args.oracle_check,
    )
    started = time.perf_counter()
    try:
        result = simplify(points, config)
    except TargetUnreachable as exc:
        _report_timing(started)
        _write_result(exc.result, args, partial=True)
        _print_notes(exc.result)
        return _machine_error(
            exc,
            reached=exc.reached,
            target=args.faces,
            partial_output=args.out + ".planes.json",
        )
    _report_timing(started)
    _write_result(result, args, partial=False)
    _print_notes(result)
    unit = "planes" if args.mode == "outer" else "vertices"
    print(
        f"wrote {len(result.halfspaces)} planes ({len(result.kept_ids)} {unit} kept,"
        f" volume ratio {result.volume_ratio:.12g}) -> {args.out}.planes.json"
    )
    return 0


def _cmd_stats(args) -> int:
    points = load_geometry(args.input)
    halfspaces, doc = load_plane_list(args.against)
    mode = doc.get("approx_mode", "outer")
    report = tightness(points, halfspaces, mode=mode)
    print(f"mode: {mode}")
    print(f"n_planes: {report.n_planes}")
    print(f"volume_ratio: {report.volume_ratio:.12g}")
    print(f"area_ratio: {report.area_ratio:.12g}")
    print(f"hausdorff_distance: {report.hausdorff_distance:.12g}")
    print(f"max_plane_violation: {report.max_plane_violation:.12g}")
    return 0


def _cmd_overlap(args) -> int:
    halfspaces_a, _ = load_plane_list(args.a)
    halfspaces_b, _ = load_plane_list(args.b)
    outcome = feasible_point(list(halfspaces_a) + list(halfspaces_b))
    if outcome.status is LpStatus.INFEASIBLE:
        print("disjoint: no point satisfies both plane lists")
        return 3
    if outcome.witness is not None:
        w = outcome.witness + 0.0  # normalize -0.0 for display
        print(f"overlap: witness point ({w[0]:.12g}, {w[1]:.12g}, {w[2]:.12g})")
    else:
        print("overlap")
    return 0


def _cmd_bench(args) -> int:
    directory = Path(args.inputs)
    if not directory.is_dir():
        print(f"error: {args.inputs} is not a directory", file=sys.stderr)
        return 2
    files = sorted(
        p
        for p in directory.iterdir()
        if p.is_file() and p.suffix.lower() in _GEOMETRY_SUFFIXES
    )
    if not files:
        print(f"error: no {'/'.join(_GEOMETRY_SUFFIXES)} files in {args.inputs}", file=sys.stderr)
        return 2
    workers = _thread_budget(len(files))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        rows = list(pool.map(lambda path: _bench_row(path, args.faces), files))
    with open(args.out, "w", newline="", encoding="ascii") as fh:
        writer = csv.DictWriter(fh, fieldnames=_BENCH_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
    failures = sum(1 for row in rows if row["error"])
    print(f"wrote {len(rows)} rows ({failures} with errors) -> {args.out}")
    return 0


def _cmd_kdop(args) -> int:
    points = load_geometry(args.input)
    halfspaces = kdop_fit(points, k=args.k)
    mesh = halfspace_intersection(halfspaces)
    if isinstance(mesh, RegionStatus):
        raise RuntimeError(f"the fitted slab region is {mesh.value}; cannot emit a solid")
    hull = convex_hull(points)
    result = SimplifiedHull(
        halfspaces=list(halfspaces),
        kept_ids=list(range(len(halfspaces))),
        mesh=mesh,
        volume=mesh.volume(),
        area=mesh.area(),
        input_volume=hull.volume(),
        input_area=hull.area(),
        center=np.asarray(mesh.vertices, dtype=np.float64).mean(axis=0),
        steps=[],
        warnings=[],
        config=SimplifyConfig(target_faces=len(halfspaces)),
    )
    write_outputs(
        result,
        args.out + ".planes.json",
        args.out + ".obj",
        triangulate=args.triangulate_output,
    )
    print(
        f"wrote {len(halfspaces)}-plane bounding solid "
        f"(volume ratio {result.volume_ratio:.12g}) -> {args.out}.planes.json"
    )
    return 0


# -- helpers ----------------------------------------------------------------


def _write_result(result: SimplifiedHull, args, partial: bool) -> None:
    write_outputs(
        result,
        args.out + ".planes.json",
        args.out + ".obj",
        triangulate=args.triangulate_output,
        partial=partial,
    )


def _print_notes(result: SimplifiedHull) -> None:
    for note in result.warnings:
        print(f"# note: {note}", file=sys.stderr)


def _report_timing(started: float) -> None:
    elapsed_ms = (time.perf_counter() - started) * 1000.0
    print(f"# timing_ms total={elapsed_ms:.3f}", file=sys.stderr)


def _thread_budget(n_jobs: int) -> int:
    raw = os.environ.get("HULLPARE_THREADS")
    if raw is None:
        limit = os.cpu_count() or 1
    else:
        try:
            limit = int(raw)
        except ValueError:
            raise ValueError(
                f"HULLPARE_THREADS must be a positive integer, got {raw!r}"
            ) from None
        if limit < 1:
            raise ValueError(
                f"HULLPARE_THREADS must be a positive integer, got {raw!r}"
            )
    return max(1, min(limit, n_jobs))


def _bench_row(path: Path, faces: int) -> dict:
    row = {column: "" for column in _BENCH_COLUMNS}
    row["file"] = path.name
    try:
        points = load_geometry(path)
        row["n_points"] = str(len(points))
        t0 = time.perf_counter()
        hull = convex_hull(points)
        t1 = time.perf_counter()
        row["hull_faces"] = str(len(hull.triangles))
        row["hull_ms"] = f"{(t1 - t0) * 1000.0:.3f}"
        config = SimplifyConfig(target_faces=faces)
        t2 = time.perf_counter()
        try:
            result = _simplify_outer(hull, config)
        except TargetUnreachable as exc:
            result = exc.result
            row["error"] = f"target unreachable at {exc.reached} planes"
        t3 = time.perf_counter()
        row["simplify_ms"] = f"{(t3 - t2) * 1000.0:.3f}"
        row["volume_ratio"] = f"{result.volume_ratio:.12g}"
    except Exception as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def _machine_error(exc: BaseException, **extra) -> int:
    line = {"error": type(exc).__name__, "message": str(exc)}
    line.update(extra)
    print(json.dumps(line), file=sys.stderr)
    return 4


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, TooFewPoints) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DegenerateInput, NonContainment) as exc:
        return _machine_error(exc)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        return _machine_error(exc)


if __name__ == "__main__":
    sys.exit(main())
