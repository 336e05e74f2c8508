"""``plconvex`` command line: check, gen, oracle and bench.

Exit codes of ``check``: 0 Convex, 1 NotConvex, 2 Invalid input,
3 Uncertain (float mode), 4 usage or I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .bench import DEFAULT_SIZES, run_bench
from .complex import SurfaceError
from .exact import format_rational
from .formats import detect_format, emit_surface, parse_surface
from .generator import Family, GenError, GenSpec, generate_full, wound_fan
from .oracle import NonPlanarFacet, supporting_hyperplane_oracle
from .verifier import EXIT_CODES, Mode, Report, Verdict, check_convexity, check_convexity_parallel

EXIT_USAGE = 4
PARALLEL_THRESHOLD = 2000  # below this many faces worker start-up dominates


class UsageError(Exception):
    pass


def _default_seed() -> int:
    env = os.environ.get("PLCONVEX_SEED")
    if env is None:
        return 0
    try:
        return int(env, 0)
    except ValueError:
        raise UsageError(f"PLCONVEX_SEED is not an integer: {env!r}") from None


def _read_input(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _load(path: str, fmt: str):
    data = _read_input(path)
    if fmt == "auto":
        fmt = detect_format(None if path == "-" else path, data)
    return parse_surface(data, fmt)


def _mode(args) -> Mode:
    if args.mode == "float":
        if not args.eps >= 0:
            raise UsageError("--eps must be nonnegative")
        return Mode("float", args.eps, args.seed)
    return Mode("exact", seed=args.seed)


def _human(report: Report) -> str:
    lines = [report.verdict.value]
    if report.witness is not None:
        lines.append(f"witness: {report.witness.dim}-face {report.witness.index}")
    if report.reason:
        lines.append(f"reason: {report.reason}")
    if report.counts:
        lines.append("counts: " + ", ".join(f"{k}={v}" for k, v in report.counts.items()))
    lines.append(f"processed faces: {report.processed}")
    lines.append(f"max predicate degree: {report.audit.degree_max}")
    if report.uncertain_faces:
        lines.append(f"uncertain faces: {report.uncertain_faces}")
    lines.append(f"elapsed: {report.elapsed * 1000:.3f} ms")
    return "\n".join(lines)


def run_check(args) -> int:
    try:
        surface = _load(args.input, args.format)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SurfaceError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_CODES[Verdict.INVALID]
    mode = _mode(args)
    jobs = args.jobs or os.cpu_count() or 1
    nfaces = surface.poset.count(surface.n - 3)
    if jobs > 1 and nfaces >= PARALLEL_THRESHOLD:
        report = check_convexity_parallel(surface, mode, jobs)
    else:
        report = check_convexity(surface, mode)
    print(report.to_json() if args.output == "json" else _human(report))
    return EXIT_CODES[report.verdict]


def run_oracle(args) -> int:
    try:
        surface = _load(args.input, args.format)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SurfaceError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 2
    if surface.vertices is None:
        print("the oracle needs vertex coordinates", file=sys.stderr)
        return 2
    try:
        verdict = supporting_hyperplane_oracle(surface)
    except NonPlanarFacet as exc:
        out = {"convex": None, "error": str(exc)}
        code = 2
    else:
        out = {
            "convex": verdict.convex,
            "failing_facet": None if verdict.failing_facet is None else verdict.failing_facet.index,
            "strictly_outside_vertex": None if verdict.strictly_outside_vertex is None
            else verdict.strictly_outside_vertex.index,
        }
        code = 0 if verdict.convex else 1
    if args.output == "json":
        print(json.dumps(out))
    elif out["convex"] is None:
        print(out["error"])
    elif out["convex"]:
        print("convex")
    else:
        print(f"not convex: facet {out['failing_facet']} has vertex "
              f"{out['strictly_outside_vertex']} strictly on its far side")
    return code


def _family(name: str) -> Family:
    for fam in Family:
        if fam.value.lower() == name.lower() or fam.name.lower() == name.lower():
            return fam
    raise UsageError(f"unknown family {name!r}")


def run_gen(args) -> int:
    fam = _family(args.family)
    if fam is Family.WOUND_FAN:
        rays = wound_fan(args.num_points or 7)
        payload = (json.dumps({"rays": [[format_rational(c) for c in r] for r in rays]}) + "\n").encode()
    else:
        try:
            if fam is Family.DENTED:
                base = GenSpec(args.dim, _family(args.base), args.num_points, args.seed,
                               transform=args.transform)
                spec = GenSpec(args.dim, fam, args.num_points, args.seed, base=base,
                               dent_depth=Fraction(args.depth))
            else:
                spec = GenSpec(args.dim, fam, args.num_points, args.seed, transform=args.transform)
            surface = generate_full(spec).surface
        except (ValueError, GenError) as exc:
            raise UsageError(str(exc)) from None
        fmt = args.format
        if fmt == "auto":
            fmt = "off" if surface.n == 3 else "plposet"
        payload = emit_surface(surface, fmt)
    if args.out and args.out != "-":
        with open(args.out, "wb") as fh:
            fh.write(payload)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()
    return 0


def run_bench_cmd(args) -> int:
    sizes = tuple(args.sizes) if args.sizes else DEFAULT_SIZES
    mode = _mode(args)
    result = run_bench(sizes, seed=args.seed, mode=mode, jobs=args.jobs, repeat=args.repeat)
    text = result.to_csv()
    if args.out and args.out != "-":
        with open(args.out, "w") as fh:
            fh.write(text)
    print(text, end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plconvex", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, jobs_default=0):
        p.add_argument("--mode", choices=("exact", "float"), default="exact")
        p.add_argument("--eps", type=float, default=1e-9, help="float-mode tolerance")
        p.add_argument("--jobs", type=int, default=jobs_default,
                       help="worker processes (0 = all cores)")
        p.add_argument("--seed", type=lambda s: int(s, 0), default=None)

    p = sub.add_parser("check", help="decide whether a surface bounds a convex polyhedron")
    p.add_argument("input", help="OFF or PLPOSET file, or - for stdin")
    p.add_argument("--format", choices=("auto", "off", "plposet"), default="auto")
    p.add_argument("--output", choices=("human", "json"), default="human")
    common(p)
    p.set_defaults(func=run_check)

    p = sub.add_parser("oracle", help="brute-force supporting-hyperplane check")
    p.add_argument("input")
    p.add_argument("--format", choices=("auto", "off", "plposet"), default="auto")
    p.add_argument("--output", choices=("human", "json"), default="human")
    p.add_argument("--seed", type=lambda s: int(s, 0), default=None)
    p.set_defaults(func=run_oracle)

    p = sub.add_parser("gen", help="generate a test instance")
    p.add_argument("family", help="RandomHull, Cube, Simplex, CrossPolytope, Hypercube, "
                                  "Dodecahedron, Dented or WoundFan")
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--num-points", type=int, default=0)
    p.add_argument("--base", default="Cube", help="base family for Dented")
    p.add_argument("--depth", default="1/2", help="dent depth in (0, 1)")
    p.add_argument("--transform", action="store_true", help="apply a random linear map")
    p.add_argument("--format", choices=("auto", "off", "plposet"), default="auto")
    p.add_argument("-o", "--out", default=None)
    p.add_argument("--seed", type=lambda s: int(s, 0), default=None)
    p.set_defaults(func=run_gen)

    p = sub.add_parser("bench", help="time the verifier on random hulls")
    p.add_argument("--sizes", type=int, nargs="+", default=None)
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("-o", "--out", default=None, help="also write the CSV here")
    common(p, jobs_default=None)
    p.set_defaults(func=run_bench_cmd)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        if getattr(args, "seed", None) is None:
            args.seed = _default_seed()
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
