"""Seeded execution of one (config, algorithm, seed) run."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from vrnetsim.environment import PeriodEnvironment
from vrnetsim.harness.config import ExperimentConfig
from vrnetsim.learning import (EpsilonSchedule, EsnAgent, LearningRate, QAgent,
                               enumerate_actions, owner_table, run_period)
from vrnetsim.topology import Topology, generate_topology

# algorithm tag -> (agent kind, correlation-aware environment)
ALGORITHMS = {
    "EsnTransfer": ("esn", True),
    "EsnNoCorr": ("esn", False),
    "QCorr": ("q", True),
    "QNoCorr": ("q", False),
}

# named random sub-streams of a run
TOPOLOGY, FADING, REQUESTS, POLICY, RESERVOIR, ACTIONS = range(6)


def substream(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for a named component (and optional index) of a run."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))


@dataclass
class PeriodRecord:
    period: int
    traces: list[list[float]]
    convergence_iter: list[int]
    final_probabilities: list[float]
    format_360_fraction: list[float]
    sigma_max: list[float]
    mean_visible_size: list[float]

    @property
    def mean_utility(self) -> np.ndarray:
        """(K,) per-SBS utility averaged over the period's iterations."""
        return np.asarray(self.traces, dtype=float).mean(axis=1)

    @property
    def total_utility(self) -> float:
        """Network total success probability averaged over iterations."""
        return float(np.asarray(self.traces, dtype=float).sum(axis=0).mean())

    @classmethod
    def from_metrics(cls, m) -> "PeriodRecord":
        return cls(m.period, m.traces.tolist(), m.convergence_iter.tolist(),
                   m.final_probabilities.tolist(), np.asarray(m.format_360_fraction).tolist(),
                   np.asarray(m.sigma_max).tolist(), np.asarray(m.mean_visible_size).tolist())


@dataclass
class RunRecord:
    """Everything one run measured, plus what is needed to identify it."""

    seed: int
    algorithm: str
    config_hash: str
    num_users: int
    topology: dict
    periods: list[PeriodRecord] = field(default_factory=list)
    checkpoints: list[dict] | None = None

    @property
    def num_sbs(self) -> int:
        return len(self.topology["sbs_positions"])

    @property
    def total_utility(self) -> float:
        """Network total success probability averaged over periods."""
        return float(np.mean([p.total_utility for p in self.periods]))

    @property
    def per_user_utility(self) -> float:
        return self.total_utility / self.num_users

    def convergence_at(self, period: int) -> float:
        """Mean convergence iteration over the SBSs that serve users."""
        rec = self.periods[period - 1]
        served = np.bincount(self.topology["association"], minlength=self.num_sbs) > 0
        return float(np.asarray(rec.convergence_iter)[served].mean())

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "algorithm": self.algorithm,
            "config_hash": self.config_hash,
            "num_users": self.num_users,
            "topology": self.topology,
            "periods": [vars(p) for p in self.periods],
            "checkpoints": self.checkpoints,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RunRecord":
        periods = [PeriodRecord(**p) for p in data["periods"]]
        return cls(data["seed"], data["algorithm"], data["config_hash"], data["num_users"],
                   data["topology"], periods, data.get("checkpoints"))


def build_agents(config: ExperimentConfig, topology: Topology, kind: str, seed: int):
    """One agent and owner table per SBS; SBSs without users get None."""
    eps = EpsilonSchedule(config.epsilon, config.epsilon_decay)
    tau = config.lam_tau or None
    agents, tables = [], []
    for j in range(topology.num_sbs):
        n_users = len(topology.users_of(j))
        if n_users == 0:
            agents.append(None)
            tables.append(None)
            continue
        table = owner_table(enumerate_actions(n_users, config.num_dl_rbs, config.num_ul_rbs,
                                              config.action_cap, substream(seed, ACTIONS, j)))
        tables.append(table)
        if kind == "esn":
            agents.append(EsnAgent(
                len(table), topology.num_sbs + 1, substream(seed, RESERVOIR, j),
                num_neurons=config.num_neurons, w=config.cycle_weight,
                lam=LearningRate(config.lam, tau), lam_prime=LearningRate(config.lam_prime, tau),
                epsilon=eps, input_scale=config.input_scale,
                normalized=config.readout_rule == "nlms"))
        else:
            agents.append(QAgent(len(table), zeta=config.zeta, epsilon=eps))
    return agents, tables


def run_experiment(config: ExperimentConfig, algorithm: str, seed: int | None = None,
                   checkpoint: bool = False) -> RunRecord:
    """Run ``num_periods`` periods of ``num_iterations`` iterations.

    Args:
        config: Validated configuration.
        algorithm: One of :data:`ALGORITHMS`.
        seed: Overrides ``config.seed``.
        checkpoint: Store the agents' final state in the record.
    """
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}; pick one of {', '.join(ALGORITHMS)}")
    seed = config.seed if seed is None else seed
    kind, aware = ALGORITHMS[algorithm]
    topology = generate_topology(config.num_sbs, config.num_users, config.area_radius,
                                 substream(seed, TOPOLOGY))
    agents, tables = build_agents(config, topology, kind, seed)
    params = config.scenario()
    policy_rng = substream(seed, POLICY)
    record = RunRecord(seed, algorithm, config.config_hash(), config.num_users, topology.to_dict())
    for n in range(1, config.num_periods + 1):
        env = PeriodEnvironment(topology, params, substream(seed, FADING, n),
                                substream(seed, REQUESTS, n), correlation_aware=aware)
        metrics = run_period(agents, tables, env, config.num_iterations, n,
                             config.num_periods, policy_rng)
        record.periods.append(PeriodRecord.from_metrics(metrics))
    if checkpoint:
        record.checkpoints = [a.checkpoint() if a is not None else None for a in agents]
    return record
