"""Command-line interface.

Subcommands: gen, graph, cover, longest, canonicalize, verify, hunt.
Exit codes: 0 ok, 1 property failure, 2 usage or resource error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import chains as chains_mod
from . import pathsolver, reorder, verify
from .errors import ArcGallaiError, NotCovering
from .family import (
    build_graph,
    covers_circle,
    format_instance,
    generate,
    minimal_cover,
    parse_instance,
)


def _load(path: str):
    return parse_instance(Path(path).read_text())


def cmd_gen(args) -> int:
    family = generate(
        args.arcs,
        args.ticks,
        seed=args.seed,
        require_cover=args.require_cover,
        require_connected=args.require_connected,
    )
    text = format_instance(family)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text)
    return 0


def cmd_graph(args) -> int:
    family, _ = _load(args.file)
    graph = build_graph(family)
    print(f"vertices {graph.n}")
    for u, v in graph.edges():
        print(f"edge {u} {v}")
    return 0


def cmd_cover(args) -> int:
    family, _ = _load(args.file)
    if not covers_circle(family):
        print("covering false")
        return 0
    print("covering true")
    cover = minimal_cover(family)
    print(f"n {cover.n}")
    print("cover " + " ".join(str(i) for i in cover.indices))
    if cover.n >= 2:
        for i in range(cover.n):
            print(f"delta {i} {cover.delta(i)}")
    return 0


def cmd_longest(args) -> int:
    family, _ = _load(args.file)
    graph = build_graph(family)
    length = pathsolver.longest_path_length(graph, bound=args.bound)
    result = pathsolver.enumerate_longest(graph, cap=args.cap, bound=args.bound)
    print(f"length {length}")
    print(f"count {result.count}")
    print(f"truncated {'true' if result.cap_exceeded else 'false'}")
    print("common " + (" ".join(str(v) for v in sorted(result.common_vertices)) or "-"))
    if args.enumerate:
        for path in result.paths:
            print("path " + " ".join(str(v) for v in path))
    return 0


def cmd_canonicalize(args) -> int:
    family, _ = _load(args.file)
    seq = tuple(int(p) for p in args.chain.split(","))
    chain = chains_mod.validate_chain(seq, family)
    graph = build_graph(family)
    best = pathsolver.longest_path_length(graph, bound=args.bound)
    if chain.t != best:
        print(f"error: chain has length {chain.t} but longest is {best}", file=sys.stderr)
        return 2
    cover = minimal_cover(family)
    trace = chains_mod.cover_trace(chain, cover)
    if not trace.proper:
        print("error: chain trace covers all of the cover; nothing to canonicalize", file=sys.stderr)
        return 2
    print("input " + " ".join(str(i) for i in chain.arcs))
    out, report = reorder.canonicalize(chain, family, cover, trace)
    for k, step in enumerate(report.steps, 1):
        print(f"step {k} rule {step.rule} swap {step.p} {step.q} f {step.f_after}")
    print("output " + " ".join(str(i) for i in out.arcs))
    for name in "abcde":
        print(f"prop {name} {'true' if report.flags[name] else 'false'}")
        if name in report.witnesses:
            arc, pos = report.witnesses[name]
            print(f"witness {name} arc {arc} pos {pos}")
    if report.aborted:
        print(f"aborted {report.aborted}")
    return 0 if report.all_ok else 1


def cmd_verify(args) -> int:
    family, _ = _load(args.file)
    report = verify.verify_instance(family, paranoid=args.paranoid)
    lines = report.to_machine_lines() if args.format == "machine" else report.to_text_lines()
    for line in lines:
        print(line)
    return 0 if report.ok else 1


def cmd_hunt(args) -> int:
    summary = verify.hunt(
        trials=args.trials,
        max_m=args.max_arcs,
        seed=args.seed,
        paranoid=args.paranoid,
        out_dir=args.out,
    )
    for line in summary.to_machine_lines():
        print(line)
    return 0 if summary.failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arcgallai",
        description="Circular-arc toolkit: covers, chain reordering, and an exact "
        "longest-path common-vertex verifier.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("--arcs", type=int, required=True, metavar="M")
    p.add_argument("--ticks", type=int, required=True, metavar="T")
    p.add_argument("--seed", type=int, required=True, metavar="S")
    p.add_argument("--require-cover", action="store_true")
    p.add_argument("--require-connected", action="store_true")
    p.add_argument("-o", "--output", default="-", metavar="FILE")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("graph", help="print the intersection graph")
    p.add_argument("file")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("cover", help="print the minimum cover and its deltas")
    p.add_argument("file")
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("longest", help="exact longest-path oracle")
    p.add_argument("file")
    p.add_argument("--enumerate", action="store_true")
    p.add_argument("--cap", type=int, default=pathsolver.DEFAULT_CAP)
    p.add_argument("--bound", type=int, default=pathsolver.DEFAULT_BOUND)
    p.set_defaults(func=cmd_longest)

    p = sub.add_parser("canonicalize", help="reorder a longest chain and trace the swaps")
    p.add_argument("file")
    p.add_argument("--chain", required=True, metavar="i1,i2,...")
    p.add_argument("--bound", type=int, default=pathsolver.DEFAULT_BOUND)
    p.set_defaults(func=cmd_canonicalize)

    p = sub.add_parser("verify", help="full pipeline on one instance")
    p.add_argument("file")
    p.add_argument("--paranoid", action="store_true")
    p.add_argument("--format", choices=("text", "machine"), default="text")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("hunt", help="randomized counterexample hunt")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--max-arcs", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--paranoid", action="store_true")
    p.add_argument("--out", default=None, metavar="DIR")
    p.set_defaults(func=cmd_hunt)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NotCovering as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ArcGallaiError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
