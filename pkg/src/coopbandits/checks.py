"""Assertable inequalities governing the learner's behavior.

These are diagnostics, not part of the learning loop: each check takes
quantities produced by the policy/simulator and confirms the corresponding
drift or variance-sum inequality, with a small numerical slack.
"""

from __future__ import annotations

import math

import numpy as np

from .graphs import CommDigraph, Graph, independence_number, strip_orientation
from .policy import truncation_floor

ONE_MINUS_INV_E = 1.0 - math.exp(-1.0)


def check_additive_drift(p_t, p_next, estimate, eta, delta=0.0, tol=1e-9) -> bool:
    """Additive sandwich on the per-action probability change of one update.

    With delta = 0 the change is bounded below by -eta*p_t(i)*est(i) and
    above by eta*p_next(i)*sum_j p_t(j)*est(j).  With delta > 0 the lower
    bound loosens to -p_t(i)*(eta*est(i) + delta) and the upper bound
    carries an indicator of whether action i sat above the truncation
    floor after the update (recomputed here from the update rule).
    """
    p_t = np.asarray(p_t, dtype=float)
    p_next = np.asarray(p_next, dtype=float)
    est = np.asarray(estimate, dtype=float)
    change = p_next - p_t
    if delta == 0.0:
        lower = -eta * p_t * est
        upper = eta * p_next * float(np.sum(p_t * est))
    else:
        k = p_t.shape[0]
        w_next = p_t * np.exp(-eta * est)
        above_floor = w_next / w_next.sum() > delta / k
        lower = -p_t * (eta * est + delta)
        per_j = 1.0 - np.where(above_floor[:, None], 1.0 - eta * est[None, :], 0.0)
        upper = p_next * (per_j * p_t[None, :]).sum(axis=1)
    return bool(np.all(change >= lower - tol) and np.all(change <= upper + tol))


def check_multiplicative_drift(p_t, p_next, d, tol=1e-12) -> bool:
    """One-step growth cap p_next(i) <= (1 + 1/d) * p_t(i), relative slack."""
    if d < 1:
        raise ValueError("multiplicative drift bound needs d >= 1")
    p_t = np.asarray(p_t, dtype=float)
    p_next = np.asarray(p_next, dtype=float)
    return bool(np.all(p_next <= (1.0 + 1.0 / d) * p_t * (1.0 + tol)))


def _neighborhood_mask(g: Graph) -> np.ndarray:
    mask = np.eye(g.n, dtype=bool)
    for u, v in g.edges:
        mask[u, v] = True
        mask[v, u] = True
    return mask


def _in_neighborhood_mask(dg: CommDigraph) -> np.ndarray:
    mask = np.zeros((dg.n, dg.n), dtype=bool)
    for u, v in dg.arcs:
        mask[v, u] = True
    return mask


def qsum_sides(graph, dists, delta=0.0, alpha_cap=40):
    """Left and right sides of the variance-sum bound, per action.

    For an undirected graph the right side is (alpha + sum_v p(i,v)) scaled
    by 1/(1 - 1/e); for a digraph (orientation-aware neighborhoods) alpha is
    replaced by 6*alpha*ln(1 + N^2*K*(1+delta)/delta), which requires
    delta > 0 and all probabilities at or above the truncation floor.
    """
    p = np.asarray(dists, dtype=float)
    n, k = p.shape
    if isinstance(graph, CommDigraph):
        if delta <= 0.0:
            raise ValueError("directed bound requires delta > 0")
        floor = truncation_floor(k, delta)
        if np.any(p < floor * (1.0 - 1e-12)):
            raise ValueError("distributions violate the truncation floor")
        mask = _in_neighborhood_mask(graph)
        alpha = independence_number(strip_orientation(graph), cap=alpha_cap)
        alpha_term = 6.0 * alpha * math.log(1.0 + n * n * k * (1.0 + delta) / delta)
    elif isinstance(graph, Graph):
        mask = _neighborhood_mask(graph)
        alpha = independence_number(graph, cap=alpha_cap)
        alpha_term = float(alpha)
    else:
        raise TypeError("expected Graph or CommDigraph")
    q = -np.expm1(mask.astype(float) @ np.log1p(-p))
    lhs = (p / q).sum(axis=0)
    rhs = (alpha_term + p.sum(axis=0)) / ONE_MINUS_INV_E
    return lhs, rhs


def check_qsum_bound(graph, dists, delta=0.0, tol=1e-9, alpha_cap=40) -> bool:
    """True when the variance-sum bound holds for every action."""
    lhs, rhs = qsum_sides(graph, dists, delta=delta, alpha_cap=alpha_cap)
    return bool(np.all(lhs <= rhs + tol))
