"""Command-line interface: simulate, sweep, graph-stats, bound, verify."""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import replace

from . import bounds, harness
from .graphs import (
    alpha_upper_bound_connected,
    bfs_distances,
    diameter,
    independence_number,
    is_connected,
    power_graph,
)


def _add_common_sim_args(p):
    p.add_argument("--graph", required=True, help="graph spec or file:PATH")
    p.add_argument("--algo", default="coop",
                   choices=["coop", "coop2", "single-delayed",
                            "baseline-repeat", "baseline-parallel"])
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--adversary", default="shift:4:0.35:0.65",
                   help="const:K:best:lo:hi | shift:phases:lo:hi | file:PATH")
    p.add_argument("--adversary-seed", type=int, default=0)
    p.add_argument("--d", type=int, default=None, help="shared delay")
    p.add_argument("--d-list", default=None, help="per-agent delays, comma list")
    p.add_argument("--ttl-list", default=None, help="per-agent ttl, comma list")
    p.add_argument("--gamma", default=None, help="float in (0,1] or 'auto'")
    p.add_argument("--eta", type=float, default=None, help="raw learning rate")
    p.add_argument("--doubling", action="store_true",
                   help="local doubling-trick learning rates")
    p.add_argument("--delta", default=None, help="float >= 0 or 'auto' (=1/T)")
    p.add_argument("--seeds", type=int, default=1, help="number of seeds")
    p.add_argument("--seed-base", type=int, default=0)
    p.add_argument("--workers", type=int, default=None)


def _parse_gamma(value):
    if value is None or value == "auto":
        return value
    return float(value)


def _parse_delta(value):
    if value is None or value == "auto":
        return value
    return float(value)


def _cmd_simulate(args):
    cfg, echo = harness.resolve_config(
        args.graph, args.algo, args.K, args.T, args.adversary,
        d=args.d, d_list=args.d_list, ttl_list=args.ttl_list,
        gamma=_parse_gamma(args.gamma), eta=args.eta, doubling=args.doubling,
        delta=_parse_delta(args.delta), adversary_seed=args.adversary_seed,
        audit=args.audit, trace_path=args.trace,
    )
    seeds = list(range(args.seed_base, args.seed_base + args.seeds))
    report = harness.simulate_report(cfg, echo, seeds, workers=args.workers)
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if args.curve:
        rounds, values = harness.regret_curve(replace(cfg, audit=False,
                                                      trace_path=None), seeds)
        with open(args.curve, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["round", "avg_cum_regret"])
            for r, v in zip(rounds, values):
                writer.writerow([int(r), repr(float(v))])
    return 0


def _cmd_sweep(args):
    gammas = []
    for g in args.gammas.split(","):
        gammas.append(g if g in ("auto", "doubling") else float(g))
    rows = harness.sweep(
        args.graphs.split(","), args.algo, args.K, args.T, args.adversary,
        [int(x) for x in args.ds.split(",")], gammas,
        list(range(args.seed_base, args.seed_base + args.seeds)),
        workers=args.workers, adversary_seed=args.adversary_seed,
    )
    out = open(args.out, "w", encoding="utf-8", newline="") if args.out else sys.stdout
    writer = csv.DictWriter(out, fieldnames=harness.SWEEP_COLUMNS)
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    if args.out:
        out.close()
    return 0


def _cmd_graph_stats(args):
    graph = harness.resolve_graph(args.graph)
    dist = bfs_distances(graph)
    connected = is_connected(dist)
    power = power_graph(graph, dist, args.d)
    stats = {
        "n": graph.n,
        "edges": len(graph.edges),
        "diameter": diameter(dist) if connected else None,
        "connected": connected,
        "d": args.d,
        "alpha": independence_number(graph, mode=args.alpha_mode),
        "alpha_power_d": independence_number(power, mode=args.alpha_mode),
        "power_edges": len(power.edges),
        "alpha_cap": alpha_upper_bound_connected(graph.n, args.d),
    }
    print(json.dumps(stats, indent=2, sort_keys=True))
    return 0


def _cmd_bound(args):
    if args.theorem == "1":
        value = bounds.evaluate_bound_thm1(args.d, args.K, args.gamma,
                                           args.N, args.alpha, args.T)
        print(json.dumps({"theorem": 1, "value": value}))
    elif args.theorem == "3":
        value = bounds.evaluate_bound_thm3(args.dbar, args.K, args.eta,
                                           args.N, args.alpha, args.T)
        print(json.dumps({"theorem": 3, "value": value}))
    else:
        value = bounds.evaluate_bound_single_delayed(args.d, args.K, args.T,
                                                     args.gamma)
        scale = bounds.parallel_baseline_scale(args.d, args.K, args.T)
        print(json.dumps({"theorem": "single-delayed", "value": value,
                          "parallel_baseline_scale": scale}))
    return 0


def _cmd_verify(args):
    result = harness.verify_suite(args.suite, trials=args.trials, seed=args.seed)
    summary = {
        "suite": result.name,
        "checked": result.checked,
        "violations": result.violations,
        "passed": result.passed,
    }
    if result.max_discrepancy is not None:
        summary["max_discrepancy"] = result.max_discrepancy
    if result.first_counterexample:
        summary["first_counterexample"] = result.first_counterexample
    print(json.dumps(summary, indent=2, sort_keys=True))
    return 0 if result.passed else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="coopbandits",
        description="Cooperative nonstochastic bandits on communication "
                    "graphs with hop delays",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one configuration across seeds")
    _add_common_sim_args(p)
    p.add_argument("--out", default=None, help="write the JSON report here")
    p.add_argument("--curve", default=None, help="write a regret-curve CSV here")
    p.add_argument("--audit", action="store_true",
                   help="run the flooding audit alongside the logical engine")
    p.add_argument("--trace", default=None, help="JSONL delivery trace path")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sweep", help="cartesian sweep, CSV summary")
    p.add_argument("--graphs", required=True, help="comma list of graph specs")
    p.add_argument("--algo", default="coop")
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--adversary", default="shift:4:0.35:0.65")
    p.add_argument("--adversary-seed", type=int, default=0)
    p.add_argument("--ds", required=True, help="comma list of delays")
    p.add_argument("--gammas", required=True,
                   help="comma list of gamma values, 'auto', or 'doubling'")
    p.add_argument("--seeds", type=int, default=1)
    p.add_argument("--seed-base", type=int, default=0)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("graph-stats", help="independence numbers and diameter")
    p.add_argument("--graph", required=True)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--alpha-mode", default="exact", choices=["exact", "greedy"])
    p.set_defaults(func=_cmd_graph_stats)

    p = sub.add_parser("bound", help="evaluate a closed-form regret bound")
    p.add_argument("--theorem", required=True, choices=["1", "3", "single"])
    p.add_argument("--d", type=int, default=0)
    p.add_argument("--dbar", type=float, default=0.0)
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--N", type=int, default=1)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--eta", type=float, default=None)
    p.set_defaults(func=_cmd_bound)

    p = sub.add_parser("verify", help="run a property-verification suite")
    p.add_argument("--suite", required=True, choices=list(harness.SUITE_NAMES))
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_verify)

    return parser


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
