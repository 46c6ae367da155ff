"""Command-line interface.

Exit codes: 0 success or isomorphic, 1 not isomorphic, 2 unsupported or out
of scope, 3 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import betti1, mobility
from .errors import (
    Ascending,
    BettiNotOne,
    BettiTooLarge,
    Elementary,
    EnumerationLimit,
    GBSError,
    HasMobileEdge,
    InvalidSlide,
    NonIntegralModulus,
    NotAPath,
    NotAscending,
    ParseError,
    ValidationError,
)
from .graph import DirectedEdge, betti_number, classify_elementary, format_path, is_bs1n, is_reduced
from .io import emit_graph, graph_to_document, load_graph
from .modular import modulus_generator
from .moves import reduce, slide

OK, OUT_OF_SCOPE, INVALID = 0, 2, 3

_SCOPE_ERRORS = (
    Ascending,
    BettiNotOne,
    BettiTooLarge,
    Elementary,
    EnumerationLimit,
    HasMobileEdge,
    NonIntegralModulus,
    NotAscending,
)


class _Out:
    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.facts: dict[str, object] = {}

    def fact(self, key: str, value: object, text: str | None = None) -> None:
        self.facts[key] = value
        if not self.as_json:
            print(f"{key}: {text if text is not None else value}")

    def finish(self) -> None:
        if self.as_json:
            print(json.dumps(self.facts, indent=2, sort_keys=True, default=str))


def _write_graph(g, out: str | None) -> None:
    text = emit_graph(g)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _cmd_validate(args) -> int:
    g = load_graph(args.file)
    out = _Out(args.json)
    out.fact("valid", True)
    out.fact("vertices", len(g.vertices))
    out.fact("edges", len(g.edges))
    out.finish()
    return OK


def _cmd_info(args) -> int:
    g = load_graph(args.file)
    out = _Out(args.json)
    b = betti_number(g)
    out.fact("betti", b)
    out.fact("reduced", is_reduced(g))
    r = reduce(g)
    if r != g:
        out.fact("reduced_edges", len(r.edges), f"{len(r.edges)} (facts below refer to the reduced graph)")
    cls = classify_elementary(r)
    out.fact("elementary", cls.value)
    if b <= 1:
        gen = modulus_generator(r)
        out.fact("modulus", str(gen.q) if gen.q is not None else "trivial")
        out.fact("orientation", gen.orientation)
    report = mobility.mobility_report(r)
    for eid, verdict in report.items():
        out.fact(f"edge {eid}", "mobile" if verdict.mobile else "non-mobile", verdict.describe().split(": ", 1)[1])
    if b == 1 and not cls.elementary:
        dec = mobility.non_mobile_decomposition(r)
        out.fact("s", dec.s)
        ascending = betti1.is_ascending_b1(r)
        out.fact("ascending", ascending)
        witness = betti1.ascending_witness(r)
        if witness:
            out.fact("monotone_cycle", format_path(witness))
        if not is_bs1n(r):
            fp = betti1.plgi_fingerprint(r)
            out.fact(
                "plgi",
                [{"subgroup": e.subgroup.hex(), "classes": len(e.space), "labels": sorted(e.labels)} for e in fp.entries],
                "; ".join(
                    f"subgroup {e.subgroup.hex()} labels {sorted(e.labels)} ({len(e.space)} pointed classes)"
                    for e in fp.entries
                )
                or "empty",
            )
            if ascending and dec.s:
                out.fact("xi", str(betti1.xi_invariant(r)))
    out.finish()
    return OK


def _cmd_reduce(args) -> int:
    _write_graph(reduce(load_graph(args.file)), args.output)
    return OK


def _cmd_normal_form(args) -> int:
    g = reduce(load_graph(args.file))
    if classify_elementary(g).elementary:
        raise Elementary("elementary group")
    if betti_number(g) != 1:
        raise BettiNotOne(f"normal forms need Betti number 1, got {betti_number(g)}")
    if betti1.is_ascending_b1(g):
        nf = g if is_bs1n(g) else betti1.ascending_normal_form(g)
    else:
        nf = betti1.nonascending_normal_form(g)
    _write_graph(nf, args.output)
    return OK


def _cmd_enum(args) -> int:
    g = reduce(load_graph(args.file))
    if classify_elementary(g).elementary:
        raise Elementary("elementary group")
    limit = args.limit
    if not mobility.mobile_edges(g, limit) or is_bs1n(g):
        found = mobility.enumerate_lg_no_mobile(g, limit)
        kind = "labeled graphs"
    elif betti_number(g) == 1:
        found = betti1.enumerate_normal_forms(g, limit)
        kind = "normal forms"
    else:
        raise HasMobileEdge("infinitely many labeled graphs")
    if args.json:
        print(json.dumps(
            {"kind": kind, "graphs": [graph_to_document(h) for h in found.values()]},
            indent=2, sort_keys=True,
        ))
    else:
        print(f"# {len(found)} {kind}")
        for code, h in found.items():
            print(f"# {code.hex()}")
            sys.stdout.write(emit_graph(h))
    return OK


def _cmd_iso(args) -> int:
    g, h = load_graph(args.file1), load_graph(args.file2)
    verdict = betti1.isomorphic(g, h)
    if args.json:
        print(json.dumps({"verdict": verdict.kind, "reason": verdict.reason}, sort_keys=True))
    else:
        print(verdict)
    return verdict.exit_code


def _cmd_slide(args) -> int:
    g = load_graph(args.file)
    edge = DirectedEdge.parse(args.edge)
    path = tuple(DirectedEdge.parse(p) for p in args.path.split(",") if p.strip())
    _write_graph(slide(g, edge, path), args.output)
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gbsiso", description=__doc__.splitlines()[0])
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True)
    # --json is accepted after the subcommand too
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS)

    p = sub.add_parser("validate", parents=[common], help="check a graph document")
    p.add_argument("file")
    p.set_defaults(run=_cmd_validate)

    p = sub.add_parser("info", parents=[common], help="report invariants and mobility")
    p.add_argument("file")
    p.set_defaults(run=_cmd_info)

    p = sub.add_parser("reduce", parents=[common], help="collapse unit-labelled edges")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.set_defaults(run=_cmd_reduce)

    p = sub.add_parser("normal-form", parents=[common], help="normal form of a Betti-1 graph")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.set_defaults(run=_cmd_normal_form)

    p = sub.add_parser("enum", parents=[common], help="enumerate a finite set of labeled graphs")
    p.add_argument("file")
    p.add_argument("--limit", type=int, default=mobility.DEFAULT_LIMIT)
    p.set_defaults(run=_cmd_enum)

    p = sub.add_parser("iso", parents=[common], help="decide isomorphism of two groups")
    p.add_argument("file1")
    p.add_argument("file2")
    p.set_defaults(run=_cmd_iso)

    p = sub.add_parser("slide", parents=[common], help="slide one edge end along a path")
    p.add_argument("file")
    p.add_argument("--edge", required=True, help="edge id, ~id for the reverse end")
    p.add_argument("--path", required=True, help="comma-separated edge ids, ~ reverses")
    p.add_argument("-o", "--output")
    p.set_defaults(run=_cmd_slide)
    return parser


def run_cli(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return OK if exc.code == 0 else INVALID
    try:
        return args.run(args)
    except (ParseError, ValidationError, InvalidSlide, NotAPath, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INVALID
    except _SCOPE_ERRORS as exc:
        print(f"out of scope: {type(exc).__name__}: {exc}", file=sys.stderr)
        return OUT_OF_SCOPE
    except GBSError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return INVALID


def main() -> None:
    sys.exit(run_cli())
