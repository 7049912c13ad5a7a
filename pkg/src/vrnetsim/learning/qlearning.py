"""Tabular Q-learning baseline keyed on the broadcast strategy input."""

from __future__ import annotations

import numpy as np

from vrnetsim.learning.policy import EpsilonSchedule, select_action


class QAgent:
    """Q-table over (broadcast input, action) with an exponential-average update.

    The state is the same vector the ESN receives (all SBS strategy indices
    plus the period), so a new period lands in unseen states and exploration
    starts over.
    """

    kind = "q"

    def __init__(self, num_actions: int, zeta: float = 0.3,
                 epsilon: EpsilonSchedule = EpsilonSchedule()):
        if not 0 < zeta <= 1:
            raise ValueError("zeta must lie in (0, 1]")
        self.num_actions = num_actions
        self.zeta = zeta
        self.epsilon = epsilon
        self.q_table: dict[tuple, np.ndarray] = {}
        self.state: tuple = ()
        self.policy_step = 0
        self.period = 1

    def values(self, state: tuple) -> np.ndarray:
        row = self.q_table.get(state)
        return np.zeros(self.num_actions) if row is None else row

    def q_update(self, state: tuple, action: int, reward: float) -> float:
        row = self.q_table.setdefault(state, np.zeros(self.num_actions))
        row[action] = (1.0 - self.zeta) * row[action] + self.zeta * reward
        return float(row[action])

    def begin_period(self, period: int) -> None:
        if period != self.period:
            self.policy_step = 0
        self.period = period

    def act(self, rng: np.random.Generator, uniform: bool = False) -> int:
        eps = self.epsilon(self.policy_step)
        self.policy_step += 1
        return select_action(self.values(self.state), eps, rng, uniform)

    def observe(self, x, action: int, utility: float) -> None:
        """Reward the action taken in the current state, then move to ``x``."""
        self.q_update(self.state, action, utility)
        self.state = tuple(np.asarray(x, dtype=float).tolist())

    def checkpoint(self) -> dict:
        return {
            "kind": self.kind,
            "zeta": self.zeta,
            "q_table": [[list(k), v.tolist()] for k, v in self.q_table.items()],
            "state": list(self.state),
            "policy_step": self.policy_step,
            "period": self.period,
        }

    def restore(self, data: dict) -> "QAgent":
        self.q_table = {tuple(k): np.array(v) for k, v in data["q_table"]}
        self.state = tuple(data["state"])
        self.policy_step = data["policy_step"]
        self.period = data["period"]
        return self
