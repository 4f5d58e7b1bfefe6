"""Experiment orchestration: seed sweeps, aggregation, bound evaluation,
and the property-verification suites.

Replicas of a configuration differ only in the seed; the loss schedule is
shared, so comparisons between algorithms on "the same schedule and seeds"
are paired.  COOPBANDITS_THREADS caps worker parallelism for sweeps.
"""

from __future__ import annotations

import itertools
import math
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import bounds, checks, policy as pol
from .adversary import parse_adversary_spec
from .graphs import (
    DEFAULT_ALPHA_CAP,
    Graph,
    ParamSet,
    alpha_upper_bound_connected,
    bfs_distances,
    build_comm_digraph,
    diameter,
    independence_number,
    is_connected,
    load_edge_list,
    parse_graph_spec,
    power_graph,
    random_connected_graph,
    strip_orientation,
)
from .simulation import RunResult, SimConfig, run_experiment

REPORT_SCHEMA = 1


# ---------------------------------------------------------------------------
# configuration resolution
# ---------------------------------------------------------------------------


def resolve_graph(spec: str) -> Graph:
    """Graph from a generator spec, or 'file:path' for an edge list."""
    if spec.startswith("file:"):
        return load_edge_list(spec[len("file:"):])
    return parse_graph_spec(spec)


def resolve_config(
    graph_spec,
    algo,
    K,
    T,
    adversary,
    d=None,
    d_list=None,
    ttl_list=None,
    gamma=None,
    eta=None,
    doubling=False,
    delta=None,
    adversary_seed=0,
    record_dists=False,
    audit=False,
    trace_path=None,
):
    """Build a SimConfig (seed 0) plus a JSON-safe echo of all choices.

    gamma='auto' resolves through the deterministic bound-minimizing grid;
    delta='auto' resolves to 1/T (individual-parameter algorithm only).
    """
    graph = resolve_graph(graph_spec)
    schedule = parse_adversary_spec(adversary, T, K, seed=adversary_seed)
    params = None
    if algo == "coop2":
        if d_list is None:
            raise ValueError("coop2 needs per-agent delays (d_list)")
        delays = _int_list(d_list, graph.n, "d_list")
        ttls = _int_list(ttl_list if ttl_list is not None else d_list,
                         graph.n, "ttl_list")
        params = ParamSet(tuple(delays), tuple(ttls))
    if delta in (None, 0):
        delta_val = 0.0
    elif delta == "auto":
        delta_val = 1.0 / T
    else:
        delta_val = float(delta)

    gamma_val, gamma_mode = gamma, "fixed"
    if gamma == "auto":
        stats = _auto_tuning_stats(graph, algo, d, params)
        gamma_val, _ = bounds.auto_gamma(stats["d"], K, stats["N"], stats["alpha"], T)
        gamma_mode = "auto"
    elif doubling:
        gamma_val, gamma_mode = None, "doubling"
    elif gamma is not None:
        gamma_val = float(gamma)

    cfg = SimConfig(
        graph=graph, algo=algo, K=K, T=T, schedule=schedule, d=d, params=params,
        gamma=gamma_val, eta=eta, doubling=doubling, delta=delta_val,
        record_dists=record_dists, audit=audit, trace_path=trace_path,
    )
    cfg.validate()
    echo = {
        "graph": graph_spec,
        "algo": algo,
        "K": K,
        "T": T,
        "adversary": adversary,
        "adversary_seed": adversary_seed,
        "d": d,
        "d_list": None if params is None else list(params.delays),
        "ttl_list": None if params is None else list(params.ttls),
        "gamma": gamma if gamma is not None else None,
        "gamma_resolved": gamma_val,
        "gamma_mode": gamma_mode,
        "eta": eta,
        "doubling": doubling,
        "delta": delta_val,
    }
    return cfg, echo


def _int_list(value, n, name):
    if isinstance(value, str):
        items = [int(x) for x in value.split(",")]
    elif isinstance(value, int):
        items = [value] * n
    else:
        items = [int(x) for x in value]
    if len(items) == 1:
        items = items * n
    if len(items) != n:
        raise ValueError(f"{name} needs 1 or {n} entries, got {len(items)}")
    return items


def _auto_tuning_stats(graph, algo, d, params):
    """Global quantities the oracle-tuned gamma grid needs."""
    dist = bfs_distances(graph)
    if algo == "coop2":
        shadow = strip_orientation(build_comm_digraph(dist, params))
        alpha = _alpha_best_effort(shadow)
        return {"d": int(round(params.mean_delay())), "N": graph.n, "alpha": alpha}
    power = power_graph(graph, dist, d)
    return {"d": d, "N": graph.n, "alpha": _alpha_best_effort(power)}


def _alpha_best_effort(graph):
    if graph.n <= DEFAULT_ALPHA_CAP:
        return independence_number(graph, mode="exact")
    return independence_number(graph, mode="greedy")


# ---------------------------------------------------------------------------
# replication and aggregation
# ---------------------------------------------------------------------------


def worker_count(requested=None):
    """Parallelism for seed sweeps, capped by COOPBANDITS_THREADS."""
    cap = os.environ.get("COOPBANDITS_THREADS")
    cap = int(cap) if cap else (os.cpu_count() or 1)
    if requested is None:
        requested = cap
    return max(1, min(requested, cap))


def _replicate_result(cfg) -> RunResult:
    return run_experiment(cfg)[1]


def run_replicates(cfg: SimConfig, seeds, workers=None):
    """One RunResult per seed, in seed order.

    Replicas share nothing mutable, so they fan out across worker
    processes; audit or trace runs stay serial (the trace file is one
    stream).
    """
    seeds = list(seeds)
    configs = [replace(cfg, seed=s) for s in seeds]
    n_workers = min(worker_count(workers), len(seeds))
    if n_workers <= 1 or cfg.audit or cfg.trace_path:
        return [_replicate_result(c) for c in configs]
    with ProcessPoolExecutor(max_workers=n_workers) as pool:
        return list(pool.map(_replicate_result, configs))


@dataclass
class RegretReport:
    """Aggregated regret, traffic, topology facts, and bound evaluations."""

    mean_regret: float
    se_regret: float
    per_agent_mean: np.ndarray
    per_seed_regret: np.ndarray
    seeds: tuple
    messages_sent: int
    messages_forwarded: int
    messages_delivered: int
    messages_dropped: int
    restarts: int
    graph_stats: dict = field(default_factory=dict)
    bound_values: dict = field(default_factory=dict)


def aggregate(results, cfg: SimConfig = None) -> RegretReport:
    """Mean and standard error across seeds; pooled counters.

    All results must come from the same configuration (up to seed).  When
    the configuration is supplied, topology statistics and the applicable
    closed-form bounds are attached.
    """
    if not results:
        raise ValueError("need at least one run result")
    key = results[0].config_key
    for r in results[1:]:
        if r.config_key != key:
            raise ValueError("cannot aggregate results from different configs")
    regrets = np.array([r.avg_welfare_regret for r in results])
    mean = float(regrets.mean())
    se = float(regrets.std(ddof=1) / math.sqrt(len(regrets))) if len(regrets) > 1 else 0.0
    per_agent = np.mean([r.per_agent_regret for r in results], axis=0)
    report = RegretReport(
        mean_regret=mean,
        se_regret=se,
        per_agent_mean=per_agent,
        per_seed_regret=regrets,
        seeds=tuple(r.seed for r in results),
        messages_sent=sum(r.messages_sent for r in results),
        messages_forwarded=sum(r.messages_forwarded for r in results),
        messages_delivered=sum(r.messages_delivered for r in results),
        messages_dropped=sum(r.messages_dropped for r in results),
        restarts=sum(r.restart_count for r in results),
    )
    if cfg is not None:
        report.graph_stats = graph_statistics(cfg)
        report.bound_values = bound_values(cfg, report.graph_stats)
    return report


def graph_statistics(cfg: SimConfig) -> dict:
    graph = cfg.graph
    dist = bfs_distances(graph)
    connected = is_connected(dist)
    stats = {"n": graph.n, "diameter": diameter(dist) if connected else None}
    if cfg.algo == "coop2":
        shadow = strip_orientation(build_comm_digraph(dist, cfg.params))
        stats["alpha"] = _alpha_best_effort(shadow)
        stats["alpha_of"] = "comm_digraph"
        stats["dbar"] = cfg.params.mean_delay()
    else:
        power = power_graph(graph, dist, cfg.d)
        stats["alpha"] = _alpha_best_effort(power)
        stats["alpha_of"] = f"power_{cfg.d}"
        stats["dbar"] = float(cfg.d)
        if connected:
            stats["alpha_cap"] = alpha_upper_bound_connected(graph.n, cfg.d)
    stats["alpha_method"] = "exact" if graph.n <= DEFAULT_ALPHA_CAP else "greedy"
    return stats


def bound_values(cfg: SimConfig, stats) -> dict:
    """The explicit bounds that apply to this configuration."""
    out = {}
    alpha, n = stats["alpha"], cfg.graph.n
    if cfg.algo in ("coop", "single-delayed", "baseline-repeat") and cfg.gamma is not None:
        out["shared_delay"] = bounds.evaluate_bound_thm1(
            cfg.d, cfg.K, cfg.gamma, n, alpha, cfg.T)
        if n == 1:
            out["parallel_baseline_scale"] = bounds.parallel_baseline_scale(
                cfg.d, cfg.K, cfg.T)
    if cfg.algo == "coop2" and cfg.eta is not None:
        out["individual_params"] = bounds.evaluate_bound_thm3(
            cfg.params.mean_delay(), cfg.K, cfg.eta, n, alpha, cfg.T)
    return out


def simulate_report(cfg, echo, seeds, workers=None) -> dict:
    """JSON-ready report: config echo, seed list, regret, traffic, bounds.

    Deterministic given (config, seeds): rerunning reproduces the report
    byte for byte within one build.
    """
    results = run_replicates(cfg, seeds, workers=workers)
    report = aggregate(results, cfg)
    return {
        "schema": REPORT_SCHEMA,
        "config": echo,
        "seeds": list(report.seeds),
        "results": {
            "mean_regret": report.mean_regret,
            "se_regret": report.se_regret,
            "per_agent_mean": [float(x) for x in report.per_agent_mean],
            "per_seed": [float(x) for x in report.per_seed_regret],
            "restarts": report.restarts,
        },
        "messages": {
            "sent": report.messages_sent,
            "forwarded": report.messages_forwarded,
            "delivered": report.messages_delivered,
            "dropped": report.messages_dropped,
        },
        "graph": report.graph_stats,
        "bounds": report.bound_values,
    }


def regret_curve(cfg: SimConfig, seeds, max_points=1000):
    """Average cumulative welfare regret per round, mean across seeds,
    downsampled to at most max_points rows of (round, value)."""
    curves = []
    for s in seeds:
        log, _ = run_experiment(replace(cfg, seed=s))
        cum_agent = log.losses.cumsum(axis=0).mean(axis=1)
        cum_best = cfg.schedule.losses[: cfg.T].cumsum(axis=0).min(axis=1)
        curves.append(cum_agent - cum_best)
    mean_curve = np.mean(curves, axis=0)
    if cfg.T <= max_points:
        rounds = np.arange(1, cfg.T + 1)
    else:
        rounds = np.unique(np.linspace(1, cfg.T, max_points).astype(int))
    return rounds, mean_curve[rounds - 1]


def sweep(graph_specs, algo, K, T, adversary, d_values, gamma_values, seeds,
          workers=None, adversary_seed=0):
    """Cartesian sweep; one summary row per combination."""
    rows = []
    for graph_spec, d, gamma in itertools.product(graph_specs, d_values, gamma_values):
        doubling = gamma == "doubling"
        cfg, echo = resolve_config(
            graph_spec, algo, K, T, adversary, d=d,
            gamma=None if doubling else gamma, doubling=doubling,
            adversary_seed=adversary_seed,
        )
        report = aggregate(run_replicates(cfg, seeds, workers=workers), cfg)
        bound = report.bound_values.get("shared_delay")
        rows.append({
            "graph": graph_spec,
            "algo": algo,
            "d": d,
            "K": K,
            "T": T,
            "gamma_mode": echo["gamma_mode"],
            "seed_count": len(report.seeds),
            "mean_regret": report.mean_regret,
            "se": report.se_regret,
            "bound": "" if bound is None else bound,
            "alpha": report.graph_stats["alpha"],
            "messages": report.messages_sent,
        })
    return rows


SWEEP_COLUMNS = ("graph", "algo", "d", "K", "T", "gamma_mode", "seed_count",
                 "mean_regret", "se", "bound", "alpha", "messages")


# ---------------------------------------------------------------------------
# verification suites
# ---------------------------------------------------------------------------

SUITE_NAMES = ("lemmas", "unbiasedness", "qsum", "equivalence")


@dataclass
class SuiteResult:
    name: str
    checked: int
    violations: int
    max_discrepancy: float = None
    first_counterexample: str = None

    @property
    def passed(self):
        return self.violations == 0


def verify_suite(name, trials=1000, seed=0) -> SuiteResult:
    """Run one named property suite and summarize violations."""
    if name == "lemmas":
        return _suite_lemmas(trials, seed)
    if name == "unbiasedness":
        return _suite_unbiasedness(trials, seed)
    if name == "qsum":
        return _suite_qsum(trials, seed)
    if name == "equivalence":
        return _suite_equivalence(trials, seed)
    raise ValueError(f"unknown suite {name!r}; choose from {SUITE_NAMES}")


def _random_loss_matrix(rng, T, K):
    return np.array([[rng.random() for _ in range(K)] for _ in range(T)])


def _suite_lemmas(trials, seed) -> SuiteResult:
    """Randomized trajectories checked step by step against the additive and
    multiplicative drift inequalities (plain and truncated variants)."""
    from .adversary import LossSchedule

    rng = random.Random(seed)
    checked = violations = 0
    first = None
    while checked < trials:
        K = rng.randint(2, 16)
        d = rng.randint(0, 8)
        n = rng.randint(1, 4)
        graph = random_connected_graph(n, 0.4, rng)
        use_truncation = d >= 1 and rng.random() < 0.5
        delta = 1.0 / d if use_truncation else 0.0
        scale = 1.0 if rng.random() < 0.2 else rng.random()
        eta = max(scale, 1e-3) / (K * math.e * (d + 1))
        rounds = d + rng.randint(3, 8)
        schedule = LossSchedule(_random_loss_matrix(rng, rounds, K), "suite")
        if use_truncation:
            cfg = SimConfig(graph=graph, algo="coop2", K=K, T=rounds,
                            schedule=schedule,
                            params=ParamSet.uniform(n, d), eta=eta, delta=delta,
                            seed=rng.randrange(2**31),
                            record_dists=True, record_estimates=True)
        else:
            cfg = SimConfig(graph=graph, algo="coop", K=K, T=rounds,
                            schedule=schedule, d=d, eta=eta,
                            seed=rng.randrange(2**31),
                            record_dists=True, record_estimates=True)
        log, _ = run_experiment(cfg)
        for t in range(rounds - 1):
            for v in range(n):
                p_t = log.dist_snapshots[t, v]
                p_next = log.dist_snapshots[t + 1, v]
                est = log.est_snapshots[t, v]
                ok = checks.check_additive_drift(p_t, p_next, est, eta, delta)
                if ok and d >= 1:
                    ok = checks.check_multiplicative_drift(p_t, p_next, d)
                checked += 1
                if not ok:
                    violations += 1
                    if first is None:
                        first = (f"seed={cfg.seed} K={K} d={d} n={n} "
                                 f"delta={delta:.4g} round={t + 1} agent={v}")
    return SuiteResult("lemmas", checked, violations, first_counterexample=first)


def exact_estimator_expectations(seed=0, warmup=4):
    """Enumerate every joint action outcome on the 3-vertex path (K=2, d=1)
    for one frozen history and return the worst absolute discrepancy of the
    three estimator-moment identities.

    The expectation of the estimate must equal the delayed loss; weighting
    by the current probability must reproduce p*loss and p*loss^2/q.
    """
    from .adversary import LossSchedule

    rng = random.Random(seed)
    n, K, d = 3, 2, 1
    graph = parse_graph_spec("path:3")
    schedule = LossSchedule(_random_loss_matrix(rng, warmup, K), "unbiasedness")
    cfg = SimConfig(graph=graph, algo="coop", K=K, T=warmup, schedule=schedule,
                    d=d, gamma=0.5, seed=rng.randrange(2**31), record_dists=True)
    log, _ = run_experiment(cfg)
    t = warmup                      # estimator round; uses round t-1
    p_lag = log.dist_snapshots[t - 2]   # distributions at round t-1
    p_now = log.dist_snapshots[t - 1]   # distributions at round t
    loss_row = schedule.losses[t - 2]   # losses at round t-1
    hoods = [[0, 1], [0, 1, 2], [1, 2]]
    q = np.array([pol.activation_probs(p_lag[h]) for h in hoods])

    e_est = np.zeros((n, K))
    e_p_est = np.zeros((n, K))
    e_p_est2 = np.zeros((n, K))
    for outcome in itertools.product(range(K), repeat=n):
        prob = 1.0
        for v, a in enumerate(outcome):
            prob *= p_lag[v, a]
        for v in range(n):
            played = set(outcome[u] for u in hoods[v])
            for i in range(K):
                if i in played:
                    est = loss_row[i] / q[v, i]
                    e_est[v, i] += prob * est
                    e_p_est[v, i] += prob * p_now[v, i] * est
                    e_p_est2[v, i] += prob * p_now[v, i] * est * est
    gap = max(
        np.abs(e_est - loss_row[None, :]).max(),
        np.abs(e_p_est - p_now * loss_row[None, :]).max(),
        np.abs(e_p_est2 - p_now * loss_row[None, :] ** 2 / q).max(),
    )
    return float(gap)


def _suite_unbiasedness(trials, seed) -> SuiteResult:
    rng = random.Random(seed)
    worst = 0.0
    violations = 0
    first = None
    for _ in range(trials):
        s = rng.randrange(2**31)
        gap = exact_estimator_expectations(seed=s)
        worst = max(worst, gap)
        if gap >= 1e-12:
            violations += 1
            if first is None:
                first = f"seed={s} discrepancy={gap:.3e}"
    return SuiteResult("unbiasedness", trials, violations,
                       max_discrepancy=worst, first_counterexample=first)


def _suite_qsum(trials, seed) -> SuiteResult:
    """Random undirected and directed instances for the variance-sum bounds."""
    from .graphs import CommDigraph

    rng = random.Random(seed)
    checked = violations = 0
    first = None
    for case in range(trials):
        n = rng.randint(1, 12)
        K = rng.randint(2, 6)
        edges = [(u, v) for u in range(n) for v in range(u + 1, n)
                 if rng.random() < 0.35]
        graph = Graph.from_edges(n, edges)
        raw = np.array([[rng.expovariate(1.0) for _ in range(K)] for _ in range(n)])
        dists = raw / raw.sum(axis=1, keepdims=True)
        ok = checks.check_qsum_bound(graph, dists)
        checked += 1
        if not ok:
            violations += 1
            first = first or f"undirected case={case} n={n} K={K}"

        delta = 0.1
        arcs = {(v, v) for v in range(n)}
        for u in range(n):
            for v in range(n):
                if u != v and rng.random() < 0.3:
                    arcs.add((u, v))
        digraph = CommDigraph(n, frozenset(arcs))
        log_w = np.array([[rng.uniform(-6, 6) for _ in range(K)] for _ in range(n)])
        floored = pol.weights_to_distribution(log_w, delta)
        ok = checks.check_qsum_bound(digraph, floored, delta=delta)
        checked += 1
        if not ok:
            violations += 1
            first = first or f"directed case={case} n={n} K={K}"
    return SuiteResult("qsum", checked, violations, first_counterexample=first)


def _suite_equivalence(trials, seed) -> SuiteResult:
    """Paired runs: individual-parameter algorithm at delta=0 with uniform
    parameters must replay the shared-delay algorithm exactly."""
    worst = 0.0
    violations = 0
    first = None
    graph_spec, K, T, d = "path:6", 3, 2000, 2
    for s in range(seed, seed + trials):
        cfg_a, _ = resolve_config(graph_spec, "coop", K, T, "shift:4:0.35:0.65",
                                  d=d, gamma=0.5, record_dists=True)
        cfg_b, _ = resolve_config(graph_spec, "coop2", K, T, "shift:4:0.35:0.65",
                                  d_list=[d] * 6, ttl_list=[d] * 6, gamma=0.5,
                                  delta=0, record_dists=True)
        log_a, _ = run_experiment(replace(cfg_a, seed=s))
        log_b, _ = run_experiment(replace(cfg_b, seed=s))
        gap = float(np.abs(log_a.dist_snapshots - log_b.dist_snapshots).max())
        worst = max(worst, gap)
        same_actions = bool(np.array_equal(log_a.actions, log_b.actions))
        if gap >= 1e-12 or not same_actions:
            violations += 1
            if first is None:
                first = f"seed={s} gap={gap:.3e} same_actions={same_actions}"
    return SuiteResult("equivalence", trials, violations,
                       max_discrepancy=worst, first_counterexample=first)
