"""Command-line front end.  Graphs travel between subcommands as graph6."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import cliques, graph, harness, homology, reduce
from .errors import (
    EmptyGraphError,
    GraphFormatError,
    InvalidCertificate,
    InvariantViolation,
    IsomorphismTooLarge,
    SimplexBudgetExceeded,
    TraceCorruptionError,
)
from .graph import bits

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2

FAMILIES = {
    "octahedron": graph.octahedron,
    "cycle": graph.cycle,
    "complete": graph.complete,
    "path": graph.path,
    "sun3": lambda _k: graph.sun3(),
}


def _read_text(path: str | None) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _load(args) -> graph.Graph:
    return graph.read_graph(_read_text(args.input))


def _simplex_budget() -> int:
    raw = os.environ.get("CLIQUE_SIMPLEX_BUDGET")
    return int(raw) if raw else homology.DEFAULT_SIMPLEX_BUDGET


def _emit(obj) -> None:
    print(json.dumps(obj))


def _sets(masks) -> list[list[int]]:
    return [bits(s) for s in masks]


def cmd_gen(args) -> int:
    if args.family != "sun3" and args.param is None:
        raise ValueError(f"--param is required for {args.family}")
    print(graph.to_graph6(FAMILIES[args.family](args.param)))
    return EXIT_OK


def cmd_kgraph(args) -> int:
    res = cliques.clique_graph(_load(args))
    print(graph.to_graph6(res.kg))
    for i, q in enumerate(res.labels):
        print(f"c label {i}: " + " ".join(map(str, bits(q))))
    return EXIT_OK


def cmd_iterate(args) -> int:
    out = cliques.iterate_clique_graph(_load(args), args.steps, args.max_vertices)
    _emit(out.as_dict())
    return EXIT_OK


def cmd_helly(args) -> int:
    g = _load(args)
    labels = cliques.maximal_cliques(g)
    w = cliques.helly_witness(g)
    _emit({"helly": w is None,
           "witness": None if w is None else _sets(labels[i] for i in bits(w.clique))})
    return EXIT_OK


def cmd_classify(args) -> int:
    g = _load(args)
    labels = cliques.maximal_cliques(g)
    items = []
    for c in cliques.classify_k2_vertices(g):
        entry = {"cliques": _sets(labels[i] for i in bits(c.clique))}
        if isinstance(c, cliques.Star):
            entry.update(kind="star", x=c.x, all_x=list(c.all_x))
        else:
            entry.update(kind="necktie",
                         center=None if c.center is None else bits(c.center),
                         ears=None if c.ears is None else _sets(c.ears))
        items.append(entry)
    _emit(items)
    return EXIT_OK


def _retraction_json(h: graph.Graph, cert: reduce.HashRetraction) -> dict:
    return {"graph6": graph.to_graph6(h), "kept": bits(cert.kept),
            "dominators": {str(k): v for k, v in sorted(cert.dominators.items())}}


def cmd_reduce(args) -> int:
    g = _load(args)
    if args.pipeline in ("h4", "h5"):
        build = reduce.build_h_invariance if args.pipeline == "h4" else reduce.build_h_clique_level
        _emit(_retraction_json(*build(g)))
        return EXIT_OK
    if args.pipeline == "wedge":
        res = reduce.low_degree_reduce(g)
        graph_out, trace, extra = res.graph, res.trace, {"wedge_count": res.wedge_count}
    else:
        res = reduce.dismantle(g)
        graph_out, trace, extra = res.core, res.trace, {"dismantlable": res.dismantlable}
    if args.format == "trace":
        sys.stdout.write(trace.to_text())
    else:
        _emit({"graph6": graph.to_graph6(graph_out), **extra, "trace": trace.to_text().splitlines()})
    return EXIT_OK


def cmd_replay(args) -> int:
    trace = reduce.ReductionTrace.from_text(_read_text(args.input))
    print(graph.to_graph6(reduce.replay(trace)))
    return EXIT_OK


def cmd_betti(args) -> int:
    print(homology.homotopy_signature(_load(args), budget=_simplex_budget()))
    return EXIT_OK


def cmd_iso(args) -> int:
    if args.a == "-" and args.b == "-":
        raise ValueError("only one of the two graphs can come from stdin")
    g, h = graph.read_graph(_read_text(args.a)), graph.read_graph(_read_text(args.b))
    try:
        _emit({"isomorphic": graph.is_isomorphic(g, h), "method": "exact"})
        return EXIT_OK
    except IsomorphismTooLarge:
        pass
    kg, kh = graph.octahedron_order(g), graph.octahedron_order(h)
    if kg is not None or kh is not None:
        _emit({"isomorphic": kg == kh, "method": "octahedron"})
    elif (g.n, g.m, sorted(g.degrees())) != (h.n, h.m, sorted(h.degrees())):
        _emit({"isomorphic": False, "method": "invariants"})
    else:
        _emit({"isomorphic": None, "method": "invariants"})
    return EXIT_OK


def cmd_verify(args) -> int:
    spec = harness.CorpusSpec(max_n=args.max_n, path=args.input,
                              include_octahedron=args.include_octahedron)
    checks = args.checks.split(",") if args.checks else harness.DEFAULT_CHECKS
    budget = args.time_budget if args.time_budget > 0 else None
    if args.out:
        with open(args.out, "w") as fh:
            summary = harness.run_corpus(spec, checks, args.jobs, fh, budget, not args.no_timings)
        _emit(summary)
    else:
        summary = harness.run_corpus(spec, checks, args.jobs, sys.stdout, budget, not args.no_timings)
    return EXIT_FAILED if summary["failed"] else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cliquehomotopy", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    src = argparse.ArgumentParser(add_help=False)
    src.add_argument("--input", "-i", default=None, help="graph6 or DIMACS file (default: stdin)")

    s = sub.add_parser("gen", help="emit a standard graph as graph6")
    s.add_argument("--family", required=True, choices=sorted(FAMILIES))
    s.add_argument("--param", type=int)
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("kgraph", parents=[src], help="clique graph as graph6 plus label table")
    s.set_defaults(func=cmd_kgraph)

    s = sub.add_parser("iterate", parents=[src], help="sizes of iterated clique graphs")
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--max-vertices", type=int, required=True)
    s.set_defaults(func=cmd_iterate)

    s = sub.add_parser("helly", parents=[src], help="Helly test with a necktie witness")
    s.set_defaults(func=cmd_helly)

    s = sub.add_parser("classify-k2", parents=[src], help="stars and neckties of the graph")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("reduce", parents=[src], help="homotopy-preserving reductions")
    s.add_argument("--pipeline", choices=["wedge", "h4", "h5", "dismantle"], default="wedge")
    s.add_argument("--format", choices=["json", "trace"], default="json",
                   help="output for wedge/dismantle pipelines")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("replay", parents=[src], help="replay a reduction trace, print the final graph6")
    s.set_defaults(func=cmd_replay)

    s = sub.add_parser("betti", parents=[src], help="Euler characteristic and GF(2) Betti numbers")
    s.set_defaults(func=cmd_betti)

    s = sub.add_parser("iso", help="isomorphism test of two graph files ('-' for stdin)")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_iso)

    s = sub.add_parser("verify", help="verify low degree graph properties over a corpus")
    s.add_argument("--max-n", type=int, required=True)
    s.add_argument("--input", "-i", default=None, help="graph6 corpus file instead of generation")
    s.add_argument("--jobs", "-j", type=int, default=1)
    s.add_argument("--out", "-o", default=None, help="JSONL report file (default: stdout)")
    s.add_argument("--checks", default=None,
                   help="comma-separated subset of: " + ",".join(harness.CHECKS))
    s.add_argument("--include-octahedron", action="store_true")
    s.add_argument("--time-budget", type=float, default=harness.DEFAULT_TIME_BUDGET,
                   help="seconds per graph; 0 disables")
    s.add_argument("--no-timings", action="store_true", help="write ms=0 for byte-stable reports")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (InvariantViolation, TraceCorruptionError, InvalidCertificate) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except (GraphFormatError, EmptyGraphError, IsomorphismTooLarge, SimplexBudgetExceeded,
            ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
