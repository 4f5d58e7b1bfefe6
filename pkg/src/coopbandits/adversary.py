"""Oblivious loss schedules.

A schedule is the full T x K loss matrix, materialized and frozen before
any simulation step runs; generators are deterministic functions of their
arguments.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class LossSchedule:
    """Immutable T x K matrix of losses in [0, 1] plus a provenance tag."""

    losses: np.ndarray
    provenance: str = ""

    def __post_init__(self):
        arr = np.asarray(self.losses, dtype=float)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 2:
            raise ValueError("losses must be a (T, K) matrix with T >= 1, K >= 2")
        if np.any(arr < 0.0) or np.any(arr > 1.0):
            raise ValueError("losses must lie in [0, 1]")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "losses", arr)

    @property
    def T(self):
        return self.losses.shape[0]

    @property
    def K(self):
        return self.losses.shape[1]


def gen_constant_gap(T, K, best_arm, low, high, seed=None, jitter=0.0) -> LossSchedule:
    """One arm at `low`, the rest at `high`, optionally jittered.

    Jitter adds independent uniform noise in [-jitter, +jitter], clipped to
    [0, 1]; it must stay below half the gap so the arm ordering survives in
    expectation even after clipping.
    """
    if not (0.0 <= low < high <= 1.0):
        raise ValueError("need 0 <= low < high <= 1")
    if not (0 <= best_arm < K):
        raise ValueError(f"best_arm {best_arm} out of range for K={K}")
    if jitter != 0.0 and not (0.0 < jitter < (high - low) / 2.0):
        raise ValueError("jitter must satisfy 0 <= jitter < (high - low) / 2")
    base = np.full((T, K), high)
    base[:, best_arm] = low
    if jitter > 0.0:
        rng = np.random.default_rng(seed)
        base = np.clip(base + rng.uniform(-jitter, jitter, size=(T, K)), 0.0, 1.0)
    tag = f"const:K={K}:best={best_arm}:lo={low}:hi={high}"
    if jitter > 0.0:
        tag += f":jitter={jitter}:seed={seed}"
    return LossSchedule(base, tag)


def gen_shifting(T, K, phases, low=0.35, high=0.65, seed=None) -> LossSchedule:
    """The low-loss arm changes every ceil(T/phases) rounds.

    Arms cycle in index order from a seed-derived starting offset, so
    consecutive phases always have distinct best arms (for K >= 2).
    """
    if phases < 1:
        raise ValueError("need phases >= 1")
    if not (0.0 <= low < high <= 1.0):
        raise ValueError("need 0 <= low < high <= 1")
    phase_len = -(-T // phases)
    offset = random.Random(seed).randrange(K) if seed is not None else 0
    losses = np.full((T, K), high)
    for t in range(T):
        best = (offset + t // phase_len) % K
        losses[t, best] = low
    return LossSchedule(losses, f"shift:phases={phases}:lo={low}:hi={high}:seed={seed}")


def load_schedule(path) -> LossSchedule:
    """Load a CSV with T rows of K comma-separated losses."""
    rows = []
    width = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            cells = line.split(",")
            if width is None:
                width = len(cells)
            elif len(cells) != width:
                raise ValueError(
                    f"{path}: line {lineno} has {len(cells)} values, expected {width}"
                )
            row = []
            for col, cell in enumerate(cells, start=1):
                try:
                    value = float(cell)
                except ValueError as exc:
                    raise ValueError(
                        f"{path}: line {lineno}, column {col}: not a number: {cell!r}"
                    ) from exc
                if not (0.0 <= value <= 1.0):
                    raise ValueError(
                        f"{path}: line {lineno}, column {col}: "
                        f"loss {value} outside [0, 1]"
                    )
                row.append(value)
            rows.append(row)
    if not rows:
        raise ValueError(f"{path}: empty loss schedule")
    return LossSchedule(np.array(rows), f"file:{path}")


def parse_adversary_spec(spec, T, K, seed=None) -> LossSchedule:
    """Build a schedule from a spec string.

    Grammar: const:K:best:lo:hi | shift:phases:lo:hi | file:path.
    The K in a const spec must match the configured K.
    """
    parts = spec.strip().split(":")
    kind = parts[0].lower()
    try:
        if kind == "const":
            k_spec, best, lo, hi = int(parts[1]), int(parts[2]), float(parts[3]), float(parts[4])
            if k_spec != K:
                raise ValueError(f"spec K={k_spec} disagrees with configured K={K}")
            return gen_constant_gap(T, k_spec, best, lo, hi, seed=seed)
        if kind == "shift":
            phases, lo, hi = int(parts[1]), float(parts[2]), float(parts[3])
            return gen_shifting(T, K, phases, lo, hi, seed=seed)
        if kind == "file":
            sched = load_schedule(":".join(parts[1:]))
            if sched.T < T or sched.K != K:
                raise ValueError(
                    f"file schedule is {sched.T}x{sched.K}, need at least {T}x{K}"
                )
            if sched.T > T:
                sched = LossSchedule(sched.losses[:T], sched.provenance)
            return sched
    except (IndexError, ValueError) as exc:
        raise ValueError(f"bad adversary spec {spec!r}: {exc}") from exc
    raise ValueError(f"unknown adversary kind {parts[0]!r} in spec {spec!r}")
