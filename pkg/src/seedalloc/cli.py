"""Command-line front end.

Subcommands:
  run                sweep experiments from a JSON config into a CSV
  oracle-check       cross-check the heuristics against the exhaustive oracle
  replicate-example  run the bundled 12-node demo and verify its outcome
  stats              print node/edge/degree statistics for an edge list
"""

from __future__ import annotations

import argparse
import sys

from .demo import format_allocation, run_demo_checks
from .graph import load_edge_list
from .harness import (
    ExperimentConfig,
    graph_stats,
    oracle_check,
    run_experiment,
    write_csv,
)
from .oracle import OracleLimitError


def _cmd_run(args) -> int:
    config = ExperimentConfig.from_json(args.config)
    rows = run_experiment(config)
    write_csv(rows, args.out)
    failures = sum(1 for r in rows if r.error)
    print(f"wrote {len(rows)} rows to {args.out}"
          + (f" ({failures} error rows)" if failures else ""))
    return 0


def _cmd_oracle_check(args) -> int:
    try:
        report, ok = oracle_check(seed=args.seed, nodes=args.nodes,
                                  advertisers=args.advertisers)
    except OracleLimitError as exc:
        print(f"oracle refused the instance: {exc}", file=sys.stderr)
        return 2
    print(report)
    if not ok:
        print("FAIL: a heuristic beat the exhaustive optimum", file=sys.stderr)
        return 1
    return 0


def _cmd_replicate_example(args) -> int:
    report = run_demo_checks(tolerance=args.tolerance)
    print(format_allocation(report.greedy))
    print(format_allocation(report.elimination))
    print(format_allocation(report.local_search))
    if report.failures:
        print("FAIL:", file=sys.stderr)
        for failure in report.failures:
            print(f"  {failure}", file=sys.stderr)
        return 1
    print("all demo checks passed")
    return 0


def _cmd_stats(args) -> int:
    graph = load_edge_list(args.graph, directed=args.directed)
    stats = graph_stats(graph)
    kind = "directed" if args.directed else "undirected"
    print(f"{args.graph} ({kind})")
    print(f"  nodes:       {stats['nodes']}")
    print(f"  edges:       {stats['edges']}")
    print(f"  avg degree:  {stats['avg_degree']:.2f}")
    print(f"  max degree:  {stats['max_degree']}")
    if stats["self_loops_skipped"] or stats["duplicates_skipped"]:
        print(f"  skipped:     {stats['self_loops_skipped']} self-loops, "
              f"{stats['duplicates_skipped']} duplicate arcs")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seedalloc",
        description="Regret-aware seed-set allocation for multi-advertiser "
                    "influence campaigns")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a configured experiment sweep")
    p_run.add_argument("--config", required=True, help="JSON config file")
    p_run.add_argument("--out", required=True, help="output CSV path")
    p_run.set_defaults(func=_cmd_run)

    p_oracle = sub.add_parser(
        "oracle-check",
        help="verify heuristics never beat the exhaustive optimum")
    p_oracle.add_argument("--seed", type=int, default=0)
    p_oracle.add_argument("--nodes", type=int, default=6)
    p_oracle.add_argument("--advertisers", type=int, default=2)
    p_oracle.set_defaults(func=_cmd_oracle_check)

    p_demo = sub.add_parser(
        "replicate-example",
        help="run the bundled 12-node demo instance and check its outcome")
    p_demo.add_argument("--tolerance", type=int, default=1,
                        help="elimination tolerance for the AEA run")
    p_demo.set_defaults(func=_cmd_replicate_example)

    p_stats = sub.add_parser("stats", help="print edge-list statistics")
    p_stats.add_argument("--graph", required=True)
    directed = p_stats.add_mutually_exclusive_group()
    directed.add_argument("--directed", dest="directed", action="store_true",
                          default=True)
    directed.add_argument("--undirected", dest="directed", action="store_false")
    p_stats.set_defaults(func=_cmd_stats)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
