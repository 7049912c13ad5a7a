"""Echo-state transfer learner run by each SBS.

The reservoir has a fixed random input matrix and a cyclic recurrent matrix
with one weight ``w`` on the cycle. Two linear readouts over ``[state; input]``
are trained online: one predicts the total success probability of each
action, the other predicts how that total moves from one period to the next.
At a period change the second readout is added onto the first, which is the
warm start the new period begins from.
"""

from __future__ import annotations

import numpy as np

from vrnetsim.errors import ContractViolation
from vrnetsim.learning.policy import EpsilonSchedule, LearningRate, select_action


def cyclic_reservoir(n: int, w: float) -> np.ndarray:
    """``w`` times the cyclic shift: ``(W @ mu)[i] = w * mu[i - 1]``."""
    if not 0.0 <= w <= 1.0:
        raise ValueError("cycle weight must lie in [0, 1]")
    return w * np.roll(np.eye(n), 1, axis=0)


def build_input(strategy_indices, action_counts, period: int, num_periods: int) -> np.ndarray:
    """Scale each SBS's strategy index and the period number into [0, 1].

    Indices are divided by the largest index of that SBS's action table;
    SBSs with a single action (or none) contribute 0.
    """
    idx = np.asarray(strategy_indices, dtype=float)
    top = np.asarray(action_counts, dtype=float) - 1.0
    scaled = np.divide(idx, top, out=np.zeros_like(idx), where=top > 0)
    return np.append(scaled, period / num_periods)


class EsnAgent:
    """ESN-based transfer RL agent for one SBS.

    Args:
        num_actions: Size of the SBS's action table.
        input_size: Length of the input vector (number of SBSs + 1).
        rng: Generator used to draw the input weights.
        num_neurons: Reservoir size.
        w: Weight on the reservoir cycle.
        lam: Utility readout learning rate (constant or schedule).
        lam_prime: Delta readout learning rate.
        epsilon: Exploration schedule; its step counter survives period
            changes because learned values carry over.
        input_scale: Input weights are uniform on ``[-input_scale, input_scale]``.
        normalized: Divide readout steps by ``|mu|^2``. The raw delta rule is
            only stable while ``lam * |mu|^2 < 2``, which a 100-neuron
            reservoir driven by [0, 1] inputs violates at ``lam = 0.3``.
    """

    kind = "esn"

    def __init__(self, num_actions: int, input_size: int, rng: np.random.Generator,
                 num_neurons: int = 100, w: float = 0.5, lam: float | LearningRate = 0.3,
                 lam_prime: float | LearningRate = 0.03,
                 epsilon: EpsilonSchedule = EpsilonSchedule(), input_scale: float = 0.5,
                 normalized: bool = True):
        self.num_actions = num_actions
        self.num_neurons = num_neurons
        self.w = w
        self.W_in = rng.uniform(-input_scale, input_scale, size=(num_neurons, input_size))
        self.W = cyclic_reservoir(num_neurons, w)
        width = num_neurons + input_size
        self.W_out = np.zeros((num_actions, width))
        self.W_delta_out = np.zeros((num_actions, width))
        self.state = np.zeros(num_neurons)
        self.x = np.zeros(input_size)
        self.lam = lam if isinstance(lam, LearningRate) else LearningRate(lam)
        self.lam_prime = lam_prime if isinstance(lam_prime, LearningRate) else LearningRate(lam_prime)
        self.epsilon = epsilon
        self.normalized = normalized
        self.policy_step = 0
        self.train_steps = 0
        self.delta_steps = 0
        self.period = 1
        self._last_utility: dict[int, float] = {}
        self._prev_period_utility: dict[int, float] = {}

    # reservoir and readouts

    def update_state(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        # cyclic W @ mu is a scaled roll
        self.state = np.tanh(self.w * np.roll(self.state, 1) + self.W_in @ x)
        self.x = x
        return self.state

    def features(self) -> np.ndarray:
        return np.concatenate([self.state, self.x])

    def predict(self) -> np.ndarray:
        return self.W_out @ self.features()

    def predict_delta(self) -> np.ndarray:
        return self.W_delta_out @ self.features()

    def _step(self, matrix: np.ndarray, row: int, target: float, rate: float) -> float:
        mu = self.state
        error = target - matrix[row] @ self.features()
        gain = rate * error
        if self.normalized:
            norm = mu @ mu
            if norm == 0.0:
                return error
            gain /= norm
        # only the state-aligned columns move; input-aligned ones keep their value
        matrix[row, : self.num_neurons] += gain * mu
        return error

    def train_utility(self, action: int, realized: float) -> float:
        """Delta-rule step of the utility readout row ``action``; returns the error."""
        err = self._step(self.W_out, action, realized, self.lam(self.train_steps))
        self.train_steps += 1
        return err

    def train_delta(self, action: int, utility_now: float, utility_before: float) -> float:
        if self.period <= 1:
            raise ContractViolation("delta readout trains only from the second period on")
        err = self._step(self.W_delta_out, action, utility_now - utility_before,
                         self.lam_prime(self.delta_steps))
        self.delta_steps += 1
        return err

    def transfer_warm_start(self) -> np.ndarray:
        """Fold the learned period-to-period delta into the utility readout.

        Afterwards ``predict()`` equals the old ``predict() + predict_delta()``.
        """
        self.W_out += self.W_delta_out
        return self.predict()

    # RL loop interface

    def begin_period(self, period: int) -> None:
        if period > 1 and period != self.period:
            self.transfer_warm_start()
            self._prev_period_utility = self._last_utility
            self._last_utility = {}
        self.period = period

    def act(self, rng: np.random.Generator, uniform: bool = False) -> int:
        eps = self.epsilon(self.policy_step)
        self.policy_step += 1
        return select_action(self.predict(), eps, rng, uniform)

    def observe(self, x, action: int, utility: float) -> None:
        self.update_state(x)
        self.train_utility(action, utility)
        if self.period > 1 and action in self._prev_period_utility:
            self.train_delta(action, utility, self._prev_period_utility[action])
        self._last_utility[action] = utility

    def checkpoint(self) -> dict:
        return {
            "kind": self.kind,
            "W_in": self.W_in.tolist(),
            "w": self.w,
            "W_out": self.W_out.tolist(),
            "W_delta_out": self.W_delta_out.tolist(),
            "state": self.state.tolist(),
            "x": self.x.tolist(),
            "policy_step": self.policy_step,
            "train_steps": self.train_steps,
            "delta_steps": self.delta_steps,
            "period": self.period,
            "last_utility": {str(k): v for k, v in self._last_utility.items()},
            "prev_period_utility": {str(k): v for k, v in self._prev_period_utility.items()},
        }

    def restore(self, data: dict) -> "EsnAgent":
        self.W_in = np.array(data["W_in"])
        self.w = data["w"]
        self.W = cyclic_reservoir(self.W_in.shape[0], self.w)
        self.W_out = np.array(data["W_out"])
        self.W_delta_out = np.array(data["W_delta_out"])
        self.state = np.array(data["state"])
        self.x = np.array(data["x"])
        self.policy_step = data["policy_step"]
        self.train_steps = data["train_steps"]
        self.delta_steps = data["delta_steps"]
        self.period = data["period"]
        self._last_utility = {int(k): v for k, v in data["last_utility"].items()}
        self._prev_period_utility = {int(k): v for k, v in data["prev_period_utility"].items()}
        return self
