"""Command-line entry point: ``fcheaps <command> ...``.

Exit codes: 0 clean, 1 violations found, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .boundary import heap_report
from .campaign import CHECKS, CampaignConfig, ConfigError, exit_status, lemma_report, parse_checks, run_campaign
from .coxeter import CoxeterGraph, GraphError, ParseError, format_word, load_graph, parse_word
from .forbidden import forbidden_scan
from .heap import Heap, HeapError, to_dot
from .tl import TLAlgebra, TLError

EXIT_OK, EXIT_VIOLATIONS, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _graph(args) -> CoxeterGraph:
    try:
        return load_graph(args.graph)
    except ParseError as err:
        raise UsageError(f"{args.graph}:{err}") from None
    except OSError as err:
        raise UsageError(f"cannot read graph file {args.graph}: {err.strerror}") from None
    except GraphError as err:
        raise UsageError(str(err)) from None


def _word(text: str, graph: CoxeterGraph):
    try:
        return parse_word(text, graph)
    except ParseError as err:
        raise UsageError(f"word {text!r}: {err}") from None


def _star_reducible(args) -> bool:
    return args.star_reducible or args.graph.startswith("family:")


def _emit(report: dict, out: str | None, stream=None):
    text = json.dumps(report, indent=2) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        (stream or sys.stdout).write(text)


def _summary(report: dict) -> str:
    counts = report["counts"]
    lines = [f"graph {report['graph']['name'] or '?'}  max_len {report['max_len']}  "
             f"elements {counts['elements']}"]
    for check in report["checks"]:
        lines.append(f"  {check}: {counts['checked'][check]} checked, "
                     f"{len(report['violations'][check])} violations")
    for note in report.get("advisories", []):
        lines.append(f"  advisory: {note}")
    return "\n".join(lines)


# -- commands -----------------------------------------------------------------


def cmd_heap_info(args) -> int:
    graph = _graph(args)
    heap = Heap.from_word(graph, _word(args.word, graph))
    report = heap_report(heap)
    if args.dot:
        Path(args.dot).write_text(to_dot(heap), encoding="utf-8")
    if args.json or args.out:
        _emit(report, args.out)
        return EXIT_OK
    print(render_heap_report(report))
    return EXIT_OK


def render_heap_report(r: dict) -> str:
    def ids(xs):
        return "{" + ", ".join(f"v{x}" for x in xs) + "}"

    def listing(items):
        return ", ".join(items) or "none"

    lines = [
        f"graph: {r['graph']['name'] or '?'} (rank {r['graph']['rank']})",
        f"word: {r['word']}    canonical: {r['canonical_word']}",
        "vertices: " + listing(f"v{v['id']}=s{v['label']}" for v in r["vertices"]),
        "covers: " + listing(f"v{a}<v{b}" for a, b in r["covers"]),
        f"fully commutative: {r['fully_commutative']}",
        "edges and boundary columns:",
    ]
    for (a, b), col in zip(r["edges"], r["boundary_columns"]):
        lines.append(f"  ({a},{b}) -> " + (" + ".join(f"v{x}" for x in col) or "0"))
    witness = r["strong_acyclicity_witness"]
    lines += [
        f"kernel dim: {r['kernel_dim']}    image dim: {r['image_dim']}",
        f"acyclic: {r['acyclic']}    strongly acyclic: {r['strongly_acyclic']}"
        + (f" (deleting v{witness} leaves a cycle)" if witness is not None else ""),
        f"boundary vertices: {ids(r['boundary_vertices'])}",
        f"effective boundary vertices: {ids(r['effective_boundary_vertices'])}",
        "equivalence classes: " + listing(ids(c) for c in r["equivalence_classes"] if len(c) > 1)
        + f" (+{sum(1 for c in r['equivalence_classes'] if len(c) == 1)} singletons)",
        f"dismantlable (P1): {r['dismantlable']}    P2: {r['property_p2']}",
    ]
    mt = r["main_theorem"]
    if mt is not None:
        lines.append("boundary vertices equivalent to effective ones: "
                     + ("yes" if mt["holds"] else f"no, v{mt['violation']} is not"))
    return "\n".join(lines)


def cmd_verify(args) -> int:
    graph = _graph(args)
    config = CampaignConfig(args.max_len, parse_checks(args.checks), jobs=args.jobs,
                            star_reducible=_star_reducible(args), timings=args.timings,
                            seed=args.seed)
    try:
        report = run_campaign(graph, config)
    except ConfigError as err:
        raise UsageError(str(err)) from None
    _emit(report, args.out)
    if args.out:
        print(_summary(report))
    return exit_status(report)


def cmd_lemma_invariants(args) -> int:
    graph = _graph(args)
    if args.max_len < 0:
        raise UsageError("max_len must be non-negative")
    report = lemma_report(graph, args.max_len, seed=args.seed, jobs=args.jobs,
                          timings=args.timings, star_reducible=_star_reducible(args))
    _emit(report, args.out)
    if args.out:
        print(_summary(report))
    return EXIT_VIOLATIONS if report["total_violations"] else EXIT_OK


def cmd_forbidden_scan(args) -> int:
    graph = _graph(args)
    if args.max_len < 0:
        raise UsageError("max_len must be non-negative")
    report = forbidden_scan(graph, args.max_len).to_dict()
    if report["advisory"]:
        print(f"advisory: {report['advisory']}", file=sys.stderr)
    _emit(report, args.out)
    if args.out:
        print(f"{report['elements']} elements scanned, {len(report['matches'])} matches")
    return EXIT_VIOLATIONS if report["matches"] else EXIT_OK


def cmd_cbasis(args) -> int:
    graph = _graph(args)
    alg = TLAlgebra(graph)
    word = _word(args.word, graph)
    try:
        key = alg.key(word)
        element = alg.b_element(key) if args.basis == "b" else alg.c_element(key)
    except TLError as err:
        raise UsageError(str(err)) from None
    print(f"{args.basis}[{format_word(key)}] =")
    print(element)
    if args.basis == "c" and args.mu:
        s, mus = alg.mu[key]
        for y in sorted(mus, key=lambda k: (len(k), k)):
            print(f"mu({format_word(y)}) = {mus[y]} (via s{s + 1})")
    return EXIT_OK


def cmd_dot(args) -> int:
    graph = _graph(args)
    heap = Heap.from_word(graph, _word(args.word, graph))
    Path(args.out).write_text(to_dot(heap), encoding="utf-8")
    return EXIT_OK


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fcheaps",
                                     description="Heaps of fully commutative elements, "
                                                 "boundary data and Temperley-Lieb bases.")
    sub = parser.add_subparsers(dest="command", required=True)

    def graph_arg(p):
        p.add_argument("--graph", required=True,
                       help="graph file, or family:<spec> such as family:B4 or family:complete(4,4)")

    def campaign_args(p, with_checks: bool):
        graph_arg(p)
        p.add_argument("--max-len", type=int, required=True)
        if with_checks:
            p.add_argument("--checks", default="main_theorem",
                           help=f"comma list from {', '.join(CHECKS)}, or 'all'")
        p.add_argument("--out", help="write the JSON report here instead of stdout")
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--star-reducible", action="store_true",
                       help="assert that a graph file defines a star reducible group "
                            "(family graphs always are)")
        p.add_argument("--timings", action="store_true", help="include wall-clock timings")

    p = sub.add_parser("heap-info", help="heap, boundary and acyclicity report for one word")
    graph_arg(p)
    p.add_argument("word")
    p.add_argument("--json", action="store_true", help="print the JSON report")
    p.add_argument("--out", help="write the JSON report to a file")
    p.add_argument("--dot", help="also write the heap in DOT format")
    p.set_defaults(func=cmd_heap_info)

    p = sub.add_parser("verify", help="run verification checks over all FC elements")
    campaign_args(p, True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("lemma-invariants", help="property battery over all FC elements")
    campaign_args(p, False)
    p.set_defaults(func=cmd_lemma_invariants)

    p = sub.add_parser("forbidden-scan", help="scan FC heaps for forbidden trace patterns")
    graph_arg(p)
    p.add_argument("--max-len", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_forbidden_scan)

    p = sub.add_parser("cbasis", help="expand a canonical (or monomial) basis element")
    graph_arg(p)
    p.add_argument("word")
    p.add_argument("--basis", choices=("c", "b"), default="c")
    p.add_argument("--mu", action="store_true", help="also list the subtracted mu terms")
    p.set_defaults(func=cmd_cbasis)

    p = sub.add_parser("dot", help="write the heap of a word in DOT format")
    graph_arg(p)
    p.add_argument("word")
    p.add_argument("out")
    p.set_defaults(func=cmd_dot)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, HeapError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
