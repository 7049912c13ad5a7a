"""The per-period interaction loop shared by every agent type."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from vrnetsim.learning.esn import build_input


@dataclass
class PeriodMetrics:
    """What one period produced.

    Attributes:
        period: 1-based period number.
        traces: (K, T) realized utility of each SBS per iteration.
        convergence_iter: (K,) 1-based convergence iteration per SBS.
        final_probabilities: (U,) success probability of each user at the
            last iteration.
        format_360_fraction: (K,) share of (content, slot) groups shipped as
            the full frame.
        sigma_max: (U,) tracking covariance maxima.
        mean_visible_size: (K,) mean visible-union payload in bits.
    """

    period: int
    traces: np.ndarray
    convergence_iter: np.ndarray
    final_probabilities: np.ndarray
    format_360_fraction: np.ndarray
    sigma_max: np.ndarray
    mean_visible_size: np.ndarray

    @property
    def mean_utility(self) -> np.ndarray:
        return self.traces.mean(axis=1)

    @property
    def total_utility(self) -> float:
        return float(self.traces.sum(axis=0).mean())


def convergence_iteration(trace, tol: float = 0.01, window: int = 100) -> int:
    """First 1-based iteration after which ``trace`` stays within ``tol`` of its tail mean.

    The tail mean is taken over the last ``window`` iterations. Returns the
    trace length when even the last value is off.
    """
    trace = np.asarray(trace, dtype=float)
    if trace.size == 0:
        return 0
    ref = trace[-window:].mean()
    off = np.abs(trace - ref) > tol * abs(ref)
    bad = np.flatnonzero(off)
    if bad.size == 0:
        return 1
    return int(min(bad[-1] + 2, trace.size))


def run_period(agents, tables, env, num_iterations: int, period: int, num_periods: int,
               policy_rng: np.random.Generator) -> PeriodMetrics:
    """Run ``num_iterations`` learning iterations of one period.

    Args:
        agents: One agent per SBS, or None for an SBS without users.
        tables: Matching (N_a, S + V) owner tables, or None.
        env: The period's environment.
        num_iterations: Iterations T.
        period: 1-based period number n.
        num_periods: Total periods N, used to scale n in the input.
        policy_rng: Shared exploration stream; every agent draws from it in
            SBS order so paired runs see the same coin flips.
    """
    k = len(agents)
    counts = [len(tab) if tab is not None else 1 for tab in tables]
    active = [j for j in range(k) if agents[j] is not None]
    for j in active:
        agents[j].begin_period(period)
    traces = np.zeros((k, num_iterations))
    prob = np.zeros(env.topology.num_users)
    strategy = [0] * k
    for t in range(num_iterations):
        first = period == 1 and t == 0
        for j in active:
            strategy[j] = agents[j].act(policy_rng, uniform=first)
        x = build_input(strategy, counts, period, num_periods)
        local = [tables[j][strategy[j]] if tables[j] is not None else None for j in range(k)]
        util, prob = env.evaluate(local, key=tuple(strategy))
        traces[:, t] = util
        for j in active:
            agents[j].observe(x, strategy[j], float(util[j]))
    conv = np.array([convergence_iteration(tr) for tr in traces], dtype=int)
    stats = env.stats
    return PeriodMetrics(period, traces, conv, np.asarray(prob, dtype=float).copy(),
                         stats.format_360_fraction, stats.sigma_max, stats.mean_visible_size)
