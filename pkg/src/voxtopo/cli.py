"""Command-line interface.

Exit codes: 0 success or agreement, 1 usage or I/O error, 2 invalid
(non-manifold) input, 3 disagreement between the fast path and the oracle.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import generator
from .boundary import validate_manifold
from .homology import AnalysisError, assemble_report
from .invariants import MeshError, mesh_genus_details, read_off
from .oracle import compare, oracle_betti
from .volume import VoxelVolume, VolumeFormatError, load_volume, save_volume

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_DISAGREE = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(obj, fmt, text):
    if fmt == "json":
        print(json.dumps(obj, indent=2))
    else:
        print(text)


def _load(path) -> VoxelVolume:
    try:
        return load_volume(path)
    except (OSError, VolumeFormatError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _violation_lines(violations):
    return "\n".join(f"{v.kind}: {v.detail}" for v in violations)


def cmd_analyze(args):
    volume = _load(args.input)
    try:
        report = assemble_report(volume)
    except AnalysisError as exc:
        print(f"invalid input ({exc})", file=sys.stderr)
        _emit(
            {"error": str(exc), "step": exc.step, "violations": [v.to_dict() for v in exc.violations]},
            args.format,
            _violation_lines(exc.violations) or str(exc),
        )
        return EXIT_INVALID
    _emit(report.to_dict(surfaces=args.per_component), args.format, report.render_text(args.per_component))
    if args.figure:
        from .plotting import plot_classification

        plot_classification(report, args.figure)
        print(f"wrote {args.figure}", file=sys.stderr)
    return EXIT_OK


def cmd_validate(args):
    violations = validate_manifold(_load(args.input))
    _emit(
        {"valid": not violations, "violations": [v.to_dict() for v in violations]},
        args.format,
        _violation_lines(violations) or "valid",
    )
    return EXIT_INVALID if violations else EXIT_OK


def cmd_oracle(args):
    b = oracle_betti(_load(args.input))
    _emit({"betti": list(b)}, args.format, f"b0={b[0]} b1={b[1]} b2={b[2]}")
    return EXIT_OK


def cmd_compare(args):
    result = compare(_load(args.input))
    text = f"{result['verdict']}: fast={result['fast']} oracle={result['oracle']}"
    for name, d in result["diff"].items():
        text += f"\n  {name}: fast={d['fast']} oracle={d['oracle']}"
    _emit(result, args.format, text)
    return {"agree": EXIT_OK, "disagree": EXIT_DISAGREE, "incomparable": EXIT_INVALID}[result["verdict"]]


def cmd_generate(args):
    build = generator.SHAPES[args.shape]
    try:
        fixture = build(*args.params)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"{args.shape}: {exc}") from exc
    fmt = args.volume_format or ("text" if Path(args.output).suffix == ".p3d" else "binary")
    save_volume(fixture.volume, args.output, fmt)
    print(
        f"{fixture.name}: dims {fixture.volume.dims}, {fixture.volume.foreground_count} voxels, "
        f"expected genera {fixture.genera}, betti {list(fixture.betti)} -> {args.output}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_mesh_genus(args):
    try:
        mesh = read_off(args.input)
        rows = mesh_genus_details(mesh)
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc}") from exc
    except MeshError as exc:
        print(f"invalid mesh: {exc}", file=sys.stderr)
        return EXIT_INVALID
    _emit(
        {"components": [{"component": r.component_id, "genus": r.genus, "euler": r.euler, "angle_defect": r.angle_defect} for r in rows]},
        args.format,
        "\n".join(f"component {r.component_id}: genus {r.genus}" for r in rows),
    )
    return EXIT_OK


def bench(sizes, repeat=1):
    """Best-of-``repeat`` analyze time on a solid ``k^3`` box per size."""
    rows = []
    for k in sizes:
        volume = generator.box(k, k, k).volume
        best = float("inf")
        for _ in range(repeat):
            t0 = time.perf_counter()
            assemble_report(volume)
            best = min(best, time.perf_counter() - t0)
        rows.append((volume.foreground_count, best))
    return rows


def cmd_bench(args):
    rows = bench(args.sizes, args.repeat)
    sep = args.delimiter
    print(f"voxels{sep}seconds")
    for n, s in rows:
        print(f"{n}{sep}{s:.6f}")
    if args.plot:
        from .plotting import plot_scaling

        plot_scaling([r[0] for r in rows], [r[1] for r in rows], args.plot)
        print(f"wrote {args.plot}", file=sys.stderr)
    return EXIT_OK


def build_parser():
    p = _Parser(prog="voxtopo", description="Genus and homology of 3-D binary voxel solids.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help, fmt=True):
        sp = sub.add_parser(name, help=help)
        sp.set_defaults(func=func)
        if fmt:
            sp.add_argument("--format", choices=("json", "text"), default="json")
        return sp

    sp = add("analyze", cmd_analyze, "genus of every boundary surface and homology of the solid")
    sp.add_argument("input")
    sp.add_argument("--per-component", action="store_true", help="include per-surface point counts")
    sp.add_argument("--figure", metavar="PNG", help="also plot point-class counts per surface")

    sp = add("validate", cmd_validate, "list manifold violations")
    sp.add_argument("input")
    sp = add("oracle", cmd_oracle, "Betti numbers by cell counting")
    sp.add_argument("input")
    sp = add("compare", cmd_compare, "fast path against the oracle")
    sp.add_argument("input")

    sp = add("generate", cmd_generate, "write a fixture volume", fmt=False)
    sp.add_argument("shape", choices=sorted(generator.SHAPES))
    sp.add_argument("params", nargs="*", type=int)
    sp.add_argument("-o", "--output", required=True)
    sp.add_argument("--volume-format", choices=("binary", "text"))

    sp = add("mesh-genus", cmd_mesh_genus, "genus of each component of a closed OFF triangle mesh")
    sp.add_argument("input")
    sp.set_defaults(format="text")

    sp = add("bench", cmd_bench, "time analyze on solid k^3 boxes", fmt=False)
    sp.add_argument("--sizes", nargs="+", type=int, default=[64, 128, 256])
    sp.add_argument("--repeat", type=int, default=1)
    sp.add_argument("--delimiter", default=",")
    sp.add_argument("--plot", metavar="PNG", help="also plot runtime against voxel count")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"voxtopo: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
