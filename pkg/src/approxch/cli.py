"""Command-line entry point: preprocess, query, verify, gen, stats.

Node ids on the command line are 1-based, as in DIMACS files.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from .contraction import DEFAULT_LIMITS, WitnessLimits
from .graph import emit_dimacs, generate_random_graph, load_dimacs
from .hierarchy import build_hierarchy, memory_bound_violations, load_ch, save_ch
from .query import QueryContext, retrieve_path
from .search_graph import build_search_graph, is_acyclic
from .verify import ReachabilityMismatch, verify_pairs


def _nonneg_float(text: str) -> float:
    value = float(text)
    if not value >= 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {text}")
    return value


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {text}")
    return value


def _pos_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="approxch", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preprocess", help="build a hierarchy from a DIMACS graph")
    p.add_argument("--input", required=True)
    p.add_argument("--epsilon", type=_nonneg_float, required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--max-settled", type=_pos_int, default=DEFAULT_LIMITS.max_settled)
    p.add_argument("--max-hops", type=_pos_int, default=DEFAULT_LIMITS.max_hops)

    p = sub.add_parser("query", help="distance between two nodes")
    p.add_argument("--ch", required=True)
    p.add_argument("--source", type=_pos_int, required=True)
    p.add_argument("--target", type=_pos_int, required=True)
    p.add_argument("--no-stalling", dest="stalling", action="store_false")
    p.add_argument("--path", action="store_true", help="also print the unpacked node sequence")

    p = sub.add_parser("verify", help="compare hierarchy queries against Dijkstra")
    p.add_argument("--ch", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--pairs", type=_nonneg_int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-stalling", dest="stalling", action="store_false")
    p.add_argument("--json", action="store_true", help="also emit a JSON record")

    p = sub.add_parser("gen", help="write a random DIMACS graph")
    p.add_argument("--nodes", type=_pos_int, required=True)
    p.add_argument("--edges", type=_nonneg_int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True)
    p.add_argument("--wmin", type=int, default=1)
    p.add_argument("--wmax", type=int, default=1000)

    p = sub.add_parser("stats", help="summarize a hierarchy file")
    p.add_argument("--ch", required=True)
    p.add_argument("--json", action="store_true", help="also emit a JSON record")
    return parser


def _load_ch(path: str):
    with open(path, "rb") as f:
        return load_ch(f)


def cmd_preprocess(args) -> int:
    with open(args.input) as f:
        g = load_dimacs(f)
    limits = WitnessLimits(args.max_settled, args.max_hops)
    started = time.perf_counter()
    h = build_hierarchy(g, args.epsilon, limits)
    elapsed = time.perf_counter() - started
    with open(args.output, "wb") as f:
        save_ch(h, f)
    print(f"nodes={h.node_count} original_edges={g.edge_count} edges={len(h.edges)} "
          f"shortcuts={h.shortcut_count} epsilon={h.epsilon:g} seconds={elapsed:.3f}")
    return 0


def cmd_query(args) -> int:
    h = _load_ch(args.ch)
    n = h.node_count
    for node in (args.source, args.target):
        if node > n:
            print(f"error: node {node} out of range 1..{n}", file=sys.stderr)
            return 2
    sg = build_search_graph(h)
    res = QueryContext(sg).run(args.source - 1, args.target - 1,
                               stalling=args.stalling, epsilon=h.epsilon)
    if not res.reachable:
        print("unreachable")
        return 0
    print(f"{res.distance:g}")
    if args.path:
        print(" ".join(str(x + 1) for x in retrieve_path(res, h)))
    return 0


def cmd_verify(args) -> int:
    h = _load_ch(args.ch)
    with open(args.graph) as f:
        g = load_dimacs(f)
    try:
        stats = verify_pairs(g, h, args.pairs, args.seed, use_stalling=args.stalling)
    except ReachabilityMismatch as exc:
        print(f"error: reachability mismatch: {exc}", file=sys.stderr)
        return 1
    print(stats.as_text())
    if args.json:
        print(stats.as_json())
    return 0 if stats.violations == 0 else 1


def cmd_gen(args) -> int:
    g = generate_random_graph(args.nodes, args.edges, (args.wmin, args.wmax), args.seed)
    with open(args.output, "w") as f:
        emit_dimacs(g, f, comment=f"random graph n={args.nodes} m={args.edges} seed={args.seed}")
    print(f"nodes={g.node_count} edges={g.edge_count}")
    return 0


def cmd_stats(args) -> int:
    h = _load_ch(args.ch)
    edges = len(h.edges)
    shortcuts = h.shortcut_count
    fraction = shortcuts / edges if edges else 0.0
    # load_ch already rejects violating files; recheck for an explicit audit line
    bad = len(memory_bound_violations(h))
    acyclic = is_acyclic(build_search_graph(h))
    print(f"epsilon={h.epsilon:g}")
    print(f"nodes={h.node_count}")
    print(f"edges={edges}")
    print(f"shortcuts={shortcuts}")
    print(f"shortcut_fraction={fraction:.6f}")
    print(f"memory_bound_audit={'ok' if bad == 0 else 'FAILED'} violations={bad}")
    print(f"search_graph_acyclic={'yes' if acyclic else 'no'}")
    if args.json:
        print(json.dumps({"record": "stats", "epsilon": h.epsilon, "nodes": h.node_count,
                          "edges": edges, "shortcuts": shortcuts, "shortcut_fraction": fraction,
                          "memory_bound_violations": bad, "acyclic": acyclic}, sort_keys=True))
    return 0 if bad == 0 and acyclic else 1


COMMANDS = {
    "preprocess": cmd_preprocess,
    "query": cmd_query,
    "verify": cmd_verify,
    "gen": cmd_gen,
    "stats": cmd_stats,
}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
