"""Cooperative nonstochastic bandits on communication graphs with hop delays."""

from .adversary import LossSchedule, gen_constant_gap, gen_shifting, load_schedule
from .bounds import (
    auto_gamma,
    evaluate_bound_single_delayed,
    evaluate_bound_thm1,
    evaluate_bound_thm3,
    parallel_baseline_scale,
)
from .checks import check_additive_drift, check_multiplicative_drift, check_qsum_bound
from .graphs import (
    CommDigraph,
    Graph,
    ParamSet,
    alpha_upper_bound_connected,
    bfs_distances,
    build_comm_digraph,
    diameter,
    independence_number,
    parse_graph_spec,
    power_graph,
)
from .harness import RegretReport, aggregate, run_replicates, simulate_report, verify_suite
from .policy import (
    DoublingState,
    PolicyState,
    activation_prob,
    activation_probs,
    doubling_step,
    emit_distribution,
    exp_update,
    gamma_schedule,
    loss_estimate,
    min_doubling_exponent,
    q_round_quantity,
)
from .simulation import (
    Message,
    RoundLog,
    RunResult,
    SimConfig,
    baseline_parallel_instances,
    baseline_repeat_actions,
    run_experiment,
    single_agent_delayed,
)

__version__ = "0.1.0"
