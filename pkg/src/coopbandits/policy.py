"""Exponential-weights learner with delayed importance-weighted estimates.

Weights live in log domain and are renormalized every round, so the
unbounded estimates produced by small activation probabilities cannot
underflow the linear-domain weights.  The update multiplies the *emitted
probability* (not the previous weight) by exp(-eta * estimate); with the
truncation parameter delta > 0 the emitted distribution is
p(i) = max(w(i)/W, delta/K) / sum_j max(w(j)/W, delta/K), which keeps every
probability at or above delta/(K*(1+delta)).
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np


def log_emitted(log_weights, delta=0.0):
    """Log of the emitted distribution, computed entirely in log domain.

    Works on any (..., K) array; normalization is along the last axis via
    log-sum-exp.  delta > 0 applies the floor-and-renormalize truncation:
    the floored values max(w/W, delta/K) sum to at most 1 + delta, so the
    renormalizer never under- or overflows.
    """
    log_w = np.asarray(log_weights, dtype=float)
    m = log_w.max(axis=-1, keepdims=True)
    base = log_w - (m + np.log(np.exp(log_w - m).sum(axis=-1, keepdims=True)))
    if delta == 0.0:
        return base
    k = log_w.shape[-1]
    floored = np.maximum(base, math.log(delta / k))
    norm = np.exp(floored).sum(axis=-1, keepdims=True)
    return floored - np.log(norm)


def weights_to_distribution(log_weights, delta=0.0):
    """Emitted distribution for the given log-domain weights."""
    return np.exp(log_emitted(log_weights, delta))


def truncation_floor(k, delta):
    """Lower bound delta/(K*(1+delta)) satisfied by every emitted probability."""
    return delta / (k * (1.0 + delta))


def updated_log_weights(log_dist, estimate, eta):
    """Log weights after one exponential update of the emitted distribution."""
    return log_dist - eta * np.asarray(estimate, dtype=float)


@dataclass
class PolicyState:
    """One agent's learner: weights, parameters, and recent distributions.

    `dist_history` holds the distributions emitted for the last min(t, d+1)
    rounds, most recent last; entry -1 is the current round's distribution.
    """

    K: int
    eta: float
    delta: float = 0.0
    d: int = 0
    log_weights: np.ndarray = None
    t: int = 1
    dist_history: deque = field(default=None, repr=False)

    def __post_init__(self):
        if self.K < 2:
            raise ValueError("need K >= 2 actions")
        if self.eta <= 0:
            raise ValueError("learning rate must be positive")
        if self.delta < 0:
            raise ValueError("delta must be >= 0")
        if self.d < 0:
            raise ValueError("delay must be >= 0")
        if self.log_weights is None:
            self.log_weights = np.zeros(self.K)
        else:
            self.log_weights = np.asarray(self.log_weights, dtype=float)
            if self.log_weights.shape != (self.K,):
                raise ValueError("log_weights must have shape (K,)")
        if self.dist_history is None:
            self.dist_history = deque(maxlen=self.d + 1)
        if not self.dist_history:
            self.dist_history.append(emit_distribution(self))

    def distribution(self):
        """The distribution emitted for the current round."""
        return self.dist_history[-1]

    def distribution_at_lag(self, lag):
        """The distribution emitted `lag` rounds ago (lag <= d)."""
        if lag < 0 or lag > self.d:
            raise ValueError(f"lag must be in [0, {self.d}]")
        if lag >= len(self.dist_history):
            raise ValueError(f"no recorded distribution at lag {lag} (t={self.t})")
        return self.dist_history[-1 - lag]

    def update(self, estimate):
        """Apply the exponential update and advance to the next round."""
        est = np.asarray(estimate, dtype=float)
        if est.shape != (self.K,):
            raise ValueError("estimate must have shape (K,)")
        if np.any(est < 0):
            raise ValueError("loss estimates must be >= 0")
        self.log_weights = updated_log_weights(
            log_emitted(self.log_weights, self.delta), est, self.eta
        )
        self.t += 1
        self.dist_history.append(emit_distribution(self))
        return self

    def restart(self, eta=None):
        """Reset weights to uniform and forget the distribution history.

        The round counter is untouched: restarting the learner does not
        rewind the protocol.
        """
        if eta is not None:
            self.eta = eta
        self.log_weights = np.zeros(self.K)
        self.dist_history.clear()
        self.dist_history.append(emit_distribution(self))
        return self


def emit_distribution(state: PolicyState) -> np.ndarray:
    """Distribution defined by the state's current weights (pure)."""
    return weights_to_distribution(state.log_weights, state.delta)


def exp_update(state: PolicyState, estimate) -> PolicyState:
    return state.update(estimate)


def activation_probs(dists) -> np.ndarray:
    """Per-action probability that at least one of the given agents plays it.

    `dists` is an iterable of distributions (the relevant in-neighborhood,
    own distribution included); returns 1 - prod(1 - p(i, v')) for each i.
    """
    arr = np.asarray(list(dists) if not isinstance(dists, np.ndarray) else dists,
                     dtype=float)
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise ValueError("need a nonempty list of distributions")
    return -np.expm1(np.log1p(-arr).sum(axis=0))


def activation_prob(i, dists) -> float:
    return float(activation_probs(dists)[i])


def loss_estimate(i, t, d, observed_loss, activated, q) -> float:
    """Importance-weighted delayed estimate for one action.

    loss * activated / q when t > d, and 0 in the warm-up rounds t <= d.
    """
    if t <= d:
        return 0.0
    if not activated:
        return 0.0
    if q <= 0.0:
        raise RuntimeError(
            "activation probability must be positive when the action fired; "
            "estimator wiring is broken"
        )
    return observed_loss / q


def estimate_vector(t, d, losses, activated, q) -> np.ndarray:
    """Vector form of loss_estimate over all K actions."""
    losses = np.asarray(losses, dtype=float)
    activated = np.asarray(activated, dtype=bool)
    q = np.asarray(q, dtype=float)
    if t <= d:
        return np.zeros_like(losses)
    if np.any(q[activated] <= 0.0):
        raise RuntimeError(
            "activation probability must be positive when the action fired; "
            "estimator wiring is broken"
        )
    out = np.zeros_like(losses)
    np.divide(losses, q, out=out, where=activated)
    return out


def q_round_value(p_lagged, qvec, t, d) -> float:
    """The per-round variance proxy driving the doubling trick.

    0 for t <= d; otherwise d + (e/2) * sum_i p_{t-d}(i) / q(i).
    """
    if t <= d:
        return 0.0
    p = np.asarray(p_lagged, dtype=float)
    q = np.asarray(qvec, dtype=float)
    return d + (math.e / 2.0) * float(np.sum(p / q))


def q_round_quantity(state: PolicyState, qvec) -> float:
    if state.t <= state.d:
        return 0.0
    return q_round_value(state.distribution_at_lag(state.d), qvec, state.t, state.d)


# ---------------------------------------------------------------------------
# local learning-rate schedule (doubling trick)
# ---------------------------------------------------------------------------


def min_doubling_exponent(K, d) -> int:
    """Least r with K*e*(d+1)*sqrt(ln(K)/2^r) <= 1."""
    if K < 2 or d < 0:
        raise ValueError("need K >= 2 and d >= 0")
    return math.ceil(math.log2(math.log(K)) + 2.0 * math.log2(K * math.e * (d + 1)))


def gamma_schedule(K, d, r) -> float:
    """gamma_r = K*e*(d+1)*sqrt(ln(K)/2^r), defined for r >= the minimal
    exponent that keeps it at or below 1."""
    r0 = min_doubling_exponent(K, d)
    if r < r0:
        raise ValueError(f"r={r} below minimal exponent r0={r0}")
    return K * math.e * (d + 1) * math.sqrt(math.log(K) / 2.0**r)


def eta_from_gamma(gamma, K, d) -> float:
    """Learning rate eta = gamma / (K*e*(d+1)) for gamma in (0, 1]."""
    if not (0.0 < gamma <= 1.0):
        raise ValueError("gamma must be in (0, 1]")
    return gamma / (K * math.e * (d + 1))


@dataclass
class DoublingState:
    """Epoch exponent and running variance-proxy sum for one agent."""

    r: int
    r0: int
    accumulator: float = 0.0
    restarts: int = 0

    @staticmethod
    def start(K, d):
        r0 = min_doubling_exponent(K, d)
        return DoublingState(r=r0, r0=r0)


def doubling_step(ds: DoublingState, q_t: float) -> bool:
    """Accumulate one round's proxy; advance the epoch when it exceeds 2^r.

    Returns True when the caller must restart its learner (reset weights,
    adopt the next gamma).  The threshold is strict: hitting 2^r exactly
    does not restart.
    """
    if q_t < 0:
        raise ValueError("round quantity must be >= 0")
    ds.accumulator += q_t
    if ds.accumulator > 2.0**ds.r:
        ds.r += 1
        ds.accumulator = 0.0
        ds.restarts += 1
        return True
    return False
