"""Command-line front end: ``coversplit <verb> ...``.

Documents go to stdout, diagnostics to stderr.  Exit codes: 0 success or
feasible, 1 a verification or certification that came out negative, 2 usage
error, 3 validation error, 10 infeasible, 11 budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import geometry, graphs, intervals
from .core import (
    CoverError,
    coloring_to_dict,
    emit_coloring,
    emit_instance,
    load_coloring,
    load_instance,
    verify_coloring,
)
from .oracle import DEFAULT_BUDGET, Status, enumerate_partitions_check, exact_split

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_VALIDATION = 3
EXIT_INFEASIBLE = 10
EXIT_BUDGET = 11

_STATUS_EXIT = {
    Status.FEASIBLE: EXIT_OK,
    Status.INFEASIBLE: EXIT_INFEASIBLE,
    Status.BUDGET_EXCEEDED: EXIT_BUDGET,
}


class UsageError(Exception):
    pass


def _dump(doc) -> str:
    return json.dumps(doc, separators=(",", ":"), ensure_ascii=False) + "\n"


def _read(path: str | None) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _read_instance(path):
    return load_instance(_read(path))


def _read_order(path: str | None):
    if path is None:
        return None
    text = Path(path).read_text()
    stripped = text.strip()
    if stripped.startswith("["):
        return json.loads(stripped)
    return stripped.split()


def _emit_result(args, inst, result, k) -> int:
    out = sys.stdout
    if result.status is Status.FEASIBLE:
        if args.format == "summary":
            out.write(f"feasible: {len(result.coloring)} set-instances colored with k={k}\n")
        else:
            out.write(emit_coloring(inst, result.coloring, k))
    else:
        doc = {"status": result.status.value, "nodes": result.nodes, "witness": result.witness}
        if args.format == "summary":
            out.write(f"{result.status.value}: {json.dumps(result.witness)}\n")
        else:
            out.write(_dump(doc))
    return _STATUS_EXIT[result.status]


# --- verbs ---------------------------------------------------------------

def cmd_generate(args) -> int:
    what = args.what
    if what == "kn":
        inst = graphs.gen_complete(args.n).to_instance()
    elif what == "dn":
        inst = graphs.gen_dumbbell_Dn(args.n).to_instance()
    elif what == "tree":
        inst = geometry.gen_tree_cover(geometry.TreeCoverParams(args.b, args.d))
    elif what == "indicator":
        inst = geometry.gen_indicator_cover(args.m, args.t)
    elif what == "random-graph":
        rng = random.Random(args.seed)
        inst = graphs.random_multigraph(rng, args.max_vertices, args.max_edges, args.max_mult).to_instance()
    elif what == "random-interval":
        rng = random.Random(args.seed)
        inst = intervals.random_kfold_cover(rng, args.n, args.k).instance
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(what)
    sys.stdout.write(emit_instance(inst))
    return EXIT_OK


def cmd_split(args) -> int:
    inst = _read_instance(args.instance)
    if args.method == "graph2":
        if args.k != 2:
            raise UsageError("split graph2 only supports --k 2")
        result = graphs.two_good_coloring(graphs.to_graph(inst))
        return _emit_result(args, inst, result, 2)
    if args.k is None:
        raise UsageError("split interval needs --k")
    lc = intervals.to_interval_cover(inst, _read_order(args.order))
    algo = intervals.sweep_split if args.algo == "sweep" else intervals.divide_and_conquer_split
    result = algo(lc, args.k)
    return _emit_result(args, lc.instance, result, args.k)


def cmd_verify(args) -> int:
    inst = _read_instance(args.instance)
    k_doc, coloring = load_coloring(Path(args.coloring).read_text())
    k = args.k if args.k is not None else k_doc
    report = verify_coloring(inst, coloring, k, args.points)
    if args.format == "summary":
        sys.stdout.write("ok\n" if report.ok else f"{len(report.violations)} violations\n")
    else:
        doc = {
            "ok": report.ok,
            "k": k,
            "violations": [
                {"point": v.point, "fold": v.fold, "missing": list(v.missing)} for v in report.violations
            ],
        }
        sys.stdout.write(_dump(doc))
    return EXIT_OK if report.ok else EXIT_NEGATIVE


def cmd_oracle(args) -> int:
    inst = _read_instance(args.instance)
    result = exact_split(inst, args.k, args.points, budget=args.budget, jobs=args.jobs)
    print(f"oracle: {result.status.value} after {result.nodes} decision nodes", file=sys.stderr)
    return _emit_result(args, inst, result, args.k)


def cmd_certify(args) -> int:
    if args.what == "tree":
        if args.b is not None and args.d is not None:
            params = geometry.TreeCoverParams(args.b, args.d)
        elif args.b is None and args.d is None:
            params = geometry.tree_params_of(_read_instance(args.instance))
        else:
            raise UsageError("give both --b and --d, or neither")
        cert = geometry.certify_tree_cover(params, jobs=args.jobs)
        doc = {
            "b": params.b,
            "d": params.d,
            "total_partitions": cert.total_partitions,
            "failing_partitions": cert.valid_witnesses,
            "part0_witnesses": cert.part0_witnesses,
            "part1_witnesses": cert.part1_witnesses,
            "exhaustive": True,
            "split_free": cert.split_free,
        }
        ok = cert.split_free
    else:
        inst = _read_instance(args.instance)
        cert = enumerate_partitions_check(inst, limit=args.limit)
        doc = {
            "total_partitions": cert.total_partitions,
            "failing_partitions": cert.failing_partitions,
            "exhaustive": cert.exhaustive,
            "split_free": cert.split_free,
        }
        if cert.splitting_partition is not None:
            part0, part1 = cert.parts(cert.splitting_partition)
            doc["splitting_partition"] = [[list(h) for h in part0], [list(h) for h in part1]]
        ok = cert.split_free
    if args.format == "summary":
        sys.stdout.write(
            f"{doc['failing_partitions']}/{doc['total_partitions']} partitions fail; "
            f"split-free: {doc['split_free']}\n"
        )
    else:
        sys.stdout.write(_dump(doc))
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_render(args) -> int:
    if args.what == "rects":
        scene = geometry.realize_rectangles(geometry.TreeCoverParams(args.b, args.d))
        text = geometry.export_svg(scene)
    else:
        text = graphs.to_graph(_read_instance(args.instance)).to_dot()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_peel(args) -> int:
    inst = _read_instance(args.instance)
    layering = intervals.layered_peel(inst)
    if args.format == "summary":
        sizes = ", ".join(str(len(layer)) for layer in layering.layers)
        sys.stdout.write(f"{len(layering.layers)} layers ({sizes}); residual {len(layering.residual)}\n")
    else:
        doc = {
            "layers": [[list(h) for h in layer] for layer in layering.layers],
            "residual": [list(h) for h in layering.residual],
        }
        sys.stdout.write(_dump(doc))
    return EXIT_OK


# --- parser ----------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "summary"), default="json")

    parser = _Parser(prog="coversplit", description="Split covers into disjoint subcovers.")
    verbs = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    gen = verbs.add_parser("generate", help="emit a generated instance document")
    gsub = gen.add_subparsers(dest="what", required=True, parser_class=_Parser)
    p = gsub.add_parser("kn", help="complete graph K_n")
    p.add_argument("--n", type=int, required=True)
    p = gsub.add_parser("dn", help="regular graph D_n without an n-good coloring (odd n)")
    p.add_argument("--n", type=int, required=True)
    p = gsub.add_parser("tree", help="truncated tree cover")
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p = gsub.add_parser("indicator", help="indicator cover of 0/1 vectors")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p = gsub.add_parser("random-graph", help="random multigraph")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-vertices", type=int, default=8)
    p.add_argument("--max-edges", type=int, default=30)
    p.add_argument("--max-mult", type=int, default=3)
    p = gsub.add_parser("random-interval", help="random k-fold interval cover")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    gen.set_defaults(func=cmd_generate)

    split = verbs.add_parser("split", help="run a splitting algorithm")
    ssub = split.add_subparsers(dest="method", required=True, parser_class=_Parser)
    p = ssub.add_parser("graph2", parents=[common], help="2-good edge coloring")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("instance", nargs="?")
    p = ssub.add_parser("interval", parents=[common], help="k-good coloring of an interval cover")
    p.add_argument("--algo", choices=("sweep", "dnc"), default="sweep")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--order", help="file listing the points in order (JSON list or whitespace separated)")
    p.add_argument("instance", nargs="?")
    split.set_defaults(func=cmd_split)

    p = verbs.add_parser("verify", parents=[common], help="check a coloring document")
    p.add_argument("--k", type=int)
    p.add_argument("--coloring", required=True)
    p.add_argument("--points", nargs="+")
    p.add_argument("instance", nargs="?")
    p.set_defaults(func=cmd_verify)

    p = verbs.add_parser("oracle", parents=[common], help="exact k-good coloring search")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--points", nargs="+")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("instance", nargs="?")
    p.set_defaults(func=cmd_oracle)

    cert = verbs.add_parser("certify", help="exhaustive indecomposability certificates")
    csub = cert.add_subparsers(dest="what", required=True, parser_class=_Parser)
    p = csub.add_parser("tree", parents=[common], help="adversary sweep over a tree cover")
    p.add_argument("--b", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("instance", nargs="?")
    p = csub.add_parser("partitions", parents=[common], help="enumerate all 2-partitions")
    p.add_argument("--limit", type=int, default=16)
    p.add_argument("instance", nargs="?")
    cert.set_defaults(func=cmd_certify)

    rend = verbs.add_parser("render", help="render scenes")
    rsub = rend.add_subparsers(dest="what", required=True, parser_class=_Parser)
    p = rsub.add_parser("rects", help="SVG of the rectangle realization")
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--out")
    p = rsub.add_parser("dot", help="Graphviz DOT of a graph instance")
    p.add_argument("--out")
    p.add_argument("instance", nargs="?")
    rend.set_defaults(func=cmd_render)

    p = verbs.add_parser("peel", parents=[common], help="layered peel diagnostic")
    p.add_argument("instance", nargs="?")
    p.set_defaults(func=cmd_peel)
    return parser


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CoverError, json.JSONDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def main() -> None:
    sys.exit(run())
