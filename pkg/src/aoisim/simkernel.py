"""Event-driven execution of one policy on one arrival sample path.

One run walks a materialized arrival array in exact epoch arithmetic (no
time discretization). The per-epoch loops are jitted with numba when it is
available and run as plain Python otherwise; both paths execute the same
statements, so results are bit-identical either way.

Conventions baked in here:

* The battery holds one unit right before t=0 and the time-0 update
  consumes it, so every path starts at level 0, age 0, S_0 = 0.
* Left-limit semantics: an arrival exactly at a decision epoch is not yet
  available at that epoch. Batch harvesting therefore consumes arrivals
  strictly before each scheduled epoch.
* A unit-battery arrival landing exactly on an update instant is counted
  as wasted (probability-zero tie; keeps epochs strictly increasing).
* The horizon only truncates: events later than T never happen, and the
  tail age (T - S_N)^2 / 2 is added by the reward accounting.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .aoi_metrics import UpdateLog, accumulate_reward
from .arrivals import sample_path
from .analytics import AOI_LOWER_BOUND
from .policies import (
    AdaptiveUnitBattery,
    BestEffortUniform,
    ConfigError,
    EnergyAwareAdaptive,
    GreedyUnitBattery,
    Policy,
    ThresholdUnitBattery,
    adaptive_beta,
    validate_policy,
)

MAX_HORIZON = 1.0e7  # keeps absolute epoch rounding below ~1e-8
_MAX_GRID_EPOCHS = 1.0e8

try:
    from numba import njit as _njit

    def _jit(func):
        return _njit(cache=True)(func)

except ImportError:  # pragma: no cover - numba is a declared dependency

    def _jit(func):
        return func


@_jit
def _uniform_path(arrivals, horizon, cap, period):
    """Best-effort uniform grid; cap < 0 means unbounded."""
    n_arr = arrivals.shape[0]
    grid = int(horizon / period) + 2
    epochs = np.empty(min(grid, n_arr + 1), np.float64)
    level = 0
    idx = 0
    n_up = 0
    wasted = 0
    infeasible = 0
    n = 1
    while True:
        s = n * period
        if s > horizon:
            break
        while idx < n_arr and arrivals[idx] < s:
            level += 1
            idx += 1
        if cap >= 0 and level > cap:
            wasted += level - cap
            level = cap
        if level >= 1:
            level -= 1
            epochs[n_up] = s
            n_up += 1
        else:
            infeasible += 1
        n += 1
    # Arrivals between the last grid epoch and the horizon still land.
    while idx < n_arr:
        level += 1
        idx += 1
    if cap >= 0 and level > cap:
        wasted += level - cap
        level = cap
    return epochs[:n_up], wasted, infeasible, level


@_jit
def _adaptive_path(arrivals, horizon, cap, d_low, d_mid, d_high):
    """Recursive schedule with the delay picked by 2*level vs cap.

    Covers the finite-battery adaptive policy (cap >= 2) and its B=1
    variant (cap = 1, where the middle branch is unreachable).
    """
    n_arr = arrivals.shape[0]
    d_min = min(d_low, min(d_mid, d_high))
    grid = int(horizon / d_min) + 4
    epochs = np.empty(min(grid, n_arr + 1), np.float64)
    level = 0
    level_before = 1  # battery right before the time-0 update
    idx = 0
    n_up = 0
    wasted = 0
    infeasible = 0
    s = 0.0
    while True:
        doubled = 2 * level_before
        if doubled < cap:
            s = s + d_low
        elif doubled == cap:
            s = s + d_mid
        else:
            s = s + d_high
        if s > horizon:
            break
        while idx < n_arr and arrivals[idx] < s:
            level += 1
            idx += 1
        if level > cap:
            wasted += level - cap
            level = cap
        level_before = level
        if level >= 1:
            level -= 1
            epochs[n_up] = s
            n_up += 1
        else:
            infeasible += 1
    while idx < n_arr:
        level += 1
        idx += 1
    if level > cap:
        wasted += level - cap
        level = cap
    return epochs[:n_up], wasted, infeasible, level


@_jit
def _unit_renewal_path(arrivals, horizon, tau0):
    """B=1 threshold renewals: each update consumes the first arrival after
    the previous update; later arrivals before the update are wasted."""
    n_arr = arrivals.shape[0]
    epochs = np.empty(n_arr + 1, np.float64)
    idx = 0
    n_up = 0
    wasted = 0
    s = 0.0
    while idx < n_arr:
        gamma = arrivals[idx] - s
        x = gamma if gamma > tau0 else tau0
        s_next = s + x
        if s_next > horizon:
            break
        idx += 1  # the triggering arrival is consumed by this update
        while idx < n_arr and arrivals[idx] <= s_next:
            wasted += 1
            idx += 1
        epochs[n_up] = s_next
        n_up += 1
        s = s_next
    # Tail: the first leftover arrival fills the slot, the rest overflow.
    if idx < n_arr:
        level = 1
        wasted += n_arr - idx - 1
    else:
        level = 0
    return epochs[:n_up], wasted, 0, level


@dataclass(frozen=True)
class SimConfig:
    """One reproducible run: policy, capacity (None = unbounded), horizon T,
    base seed and arrival rate."""

    policy: Policy
    capacity: int | None
    horizon: float
    seed: int
    rate: float = 1.0

    def validate(self) -> None:
        validate_policy(self.policy, self.capacity)
        if self.capacity is not None and self.capacity < 1:
            raise ConfigError("capacity must be a positive integer or None")
        if not 0.0 < self.horizon <= MAX_HORIZON:
            raise ConfigError(
                f"horizon must lie in (0, {MAX_HORIZON:g}]")
        if self.rate <= 0:
            raise ConfigError("rate must be positive")
        if isinstance(self.policy, BestEffortUniform):
            if self.horizon / self.policy.period > _MAX_GRID_EPOCHS:
                raise ConfigError("uniform grid too dense for this horizon")


@dataclass
class SimSummary:
    """Per-path outcome: time-average age plus energy accounting."""

    time_avg_aoi: float
    reward: float
    updates: int
    wasted_units: int
    infeasible_epochs: int
    final_level: int
    horizon: float
    arrivals_seen: int


def simulate_path(arrivals: np.ndarray, policy: Policy,
                  capacity: int | None, horizon: float):
    """Run one policy over a materialized arrival array.

    Returns (epochs, wasted, infeasible, final_level). Exposed separately
    from run_path so tests can drive hand-crafted arrival sequences.
    """
    validate_policy(policy, capacity)
    arrivals = np.ascontiguousarray(arrivals, dtype=np.float64)
    if isinstance(policy, BestEffortUniform):
        cap = -1 if capacity is None else capacity
        return _uniform_path(arrivals, horizon, cap, policy.period)
    if isinstance(policy, EnergyAwareAdaptive):
        beta = adaptive_beta(policy.k, capacity)
        return _adaptive_path(arrivals, horizon, capacity,
                              1.0 / (1.0 - beta), 1.0, 1.0 / (1.0 + beta))
    if isinstance(policy, AdaptiveUnitBattery):
        beta = policy.beta
        return _adaptive_path(arrivals, horizon, 1,
                              1.0 / (1.0 - beta), 1.0, 1.0 / (1.0 + beta))
    if isinstance(policy, ThresholdUnitBattery):
        return _unit_renewal_path(arrivals, horizon, policy.tau0)
    if isinstance(policy, GreedyUnitBattery):
        return _unit_renewal_path(arrivals, horizon, 0.0)
    raise ConfigError(f"unknown policy variant {type(policy).__name__}")


def _unit_gammas(arrivals: np.ndarray, epochs: np.ndarray) -> np.ndarray:
    """Per-renewal delay to the first arrival strictly after each S_{n-1}."""
    prev = np.concatenate(([0.0], epochs[:-1]))
    idx = np.searchsorted(arrivals, prev, side="right")
    return arrivals[idx] - prev


def run_path(config: SimConfig) -> tuple[SimSummary, UpdateLog]:
    """Simulate one sample path up to the horizon."""
    config.validate()
    arrivals = sample_path(config.seed, config.horizon, config.rate)
    epochs, wasted, infeasible, level = simulate_path(
        arrivals, config.policy, config.capacity, config.horizon)
    gammas = None
    if config.capacity == 1 and len(epochs):
        gammas = _unit_gammas(arrivals, epochs)
    log = UpdateLog(epochs=epochs, gammas=gammas)
    log.validate()
    tally = accumulate_reward(log, config.horizon)
    summary = SimSummary(
        time_avg_aoi=tally.time_average,
        reward=tally.reward,
        updates=tally.updates,
        wasted_units=int(wasted),
        infeasible_epochs=int(infeasible),
        final_level=int(level),
        horizon=config.horizon,
        arrivals_seen=len(arrivals),
    )
    return summary, log


def aoi_gap(summary: SimSummary) -> float:
    """Distance of the realized time-average age from the universal bound."""
    return summary.time_avg_aoi - AOI_LOWER_BOUND
