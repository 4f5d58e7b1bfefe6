"""Closed-form regret-bound evaluators.

These compute the explicit (non-asymptotic) expressions so experiment
reports can place empirical regret next to the proven guarantees.
"""

from __future__ import annotations

import math

ONE_MINUS_INV_E = 1.0 - math.exp(-1.0)


def evaluate_bound_thm1(d, K, gamma, N, alpha, T) -> float:
    """Shared-delay cooperative bound at learning rate gamma/(K e (d+1)).

    2d + K e (d+1) ln(K) / gamma
       + gamma * (alpha / (2 (1 - 1/e) (d+1) N) + 3 / (K e)) * T
    """
    if not (0.0 < gamma <= 1.0):
        raise ValueError("gamma must be in (0, 1]")
    if K < 2 or d < 0 or N < 1 or alpha < 1 or T < 0:
        raise ValueError("need K >= 2, d >= 0, N >= 1, alpha >= 1, T >= 0")
    rate_term = K * math.e * (d + 1) * math.log(K) / gamma
    variance = alpha / (2.0 * ONE_MINUS_INV_E * (d + 1) * N) + 3.0 / (K * math.e)
    return 2.0 * d + rate_term + gamma * variance * T


def evaluate_bound_thm3(dbar, K, eta, N, alpha, T) -> float:
    """Individual-parameter cooperative bound with exploration 1/T baked in.

    3 dbar + eta T dbar + (1 + ln K)/eta
       + (e eta / (2 (1 - 1/e))) T (6 (K/N) alpha ln(1 + 2 T N^2 K) + 1)
    """
    if eta <= 0.0:
        raise ValueError("eta must be positive")
    if K < 2 or dbar < 0 or N < 1 or alpha < 1 or T < 1:
        raise ValueError("need K >= 2, dbar >= 0, N >= 1, alpha >= 1, T >= 1")
    log_term = 6.0 * (K / N) * alpha * math.log(1.0 + 2.0 * T * N * N * K) + 1.0
    return (
        3.0 * dbar
        + eta * T * dbar
        + (1.0 + math.log(K)) / eta
        + (math.e * eta / (2.0 * ONE_MINUS_INV_E)) * T * log_term
    )


def evaluate_bound_single_delayed(d, K, T, gamma) -> float:
    """Single agent with constant feedback delay: the shared-delay bound at
    N = 1, alpha = 1."""
    return evaluate_bound_thm1(d, K, gamma, 1, 1, T)


def parallel_baseline_scale(d, K, T) -> float:
    """sqrt((d+1) K T): the regret scale of running d+1 interleaved
    no-delay learners."""
    if K < 2 or d < 0 or T < 0:
        raise ValueError("need K >= 2, d >= 0, T >= 0")
    return math.sqrt((d + 1) * K * T)


def auto_gamma(d, K, N, alpha, T, max_halvings=20):
    """Deterministic grid search: the gamma in {2^0, 2^-1, ...} minimizing
    the shared-delay bound (first minimum wins ties).

    This is the oracle-tuned setting; it needs the global quantities N and
    alpha, unlike the doubling schedule.
    """
    best_gamma, best_value = None, math.inf
    for k in range(max_halvings + 1):
        gamma = 2.0**-k
        value = evaluate_bound_thm1(d, K, gamma, N, alpha, T)
        if value < best_value:
            best_gamma, best_value = gamma, value
    return best_gamma, best_value
