from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class EpsilonSchedule:
    """Exploration rate ``initial * decay**step``; ``decay=1`` keeps it fixed."""

    initial: float = 0.1
    decay: float = 1.0

    def __call__(self, step: int) -> float:
        return self.initial * self.decay**step


@dataclass(frozen=True)
class LearningRate:
    """Constant rate, or ``initial / (1 + t / tau)`` when ``tau`` is set.

    The decaying form satisfies the Robbins-Monro conditions.
    """

    initial: float
    tau: float | None = None

    def __call__(self, t: int) -> float:
        if self.tau is None:
            return self.initial
        return self.initial / (1.0 + t / self.tau)


def select_action(values: np.ndarray, epsilon: float, rng: np.random.Generator,
                  uniform: bool = False) -> int:
    """Epsilon-greedy choice with lowest-index tie-breaking.

    Always consumes exactly two draws from ``rng`` so that runs differing only
    in their value estimates see the same exploration coin flips.
    """
    coin = rng.random()
    pick = int(rng.integers(len(values)))
    if uniform or coin < epsilon:
        return pick
    return int(np.argmax(values))
