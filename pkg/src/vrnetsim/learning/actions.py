"""Per-SBS action tables: every RB in each direction goes to exactly one user."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Allocation:
    """One SBS action, stored as the local user that owns each RB.

    ``downlink[k]`` / ``uplink[k]`` index into the SBS's user list.
    """

    downlink: tuple[int, ...]
    uplink: tuple[int, ...]
    num_users: int

    @property
    def s(self) -> np.ndarray:
        """Binary (users x S) downlink assignment matrix."""
        return _one_hot(self.downlink, self.num_users)

    @property
    def v(self) -> np.ndarray:
        """Binary (users x V) uplink assignment matrix."""
        return _one_hot(self.uplink, self.num_users)


def _one_hot(owners, num_users) -> np.ndarray:
    m = np.zeros((num_users, len(owners)), dtype=int)
    m[list(owners), np.arange(len(owners))] = 1
    return m


def enumerate_actions(num_users: int, num_dl: int, num_ul: int, cap: int,
                      seed: int | np.random.Generator = 0) -> list[Allocation]:
    """All RB-to-user assignments, or a seeded sample of ``cap`` distinct ones.

    Full enumeration is in lexicographic order of the owner vector (downlink
    RBs first). Sampled tables are sorted the same way so indices stay stable.
    """
    if num_users < 1:
        raise ValueError("an SBS needs at least one user to act")
    width = num_dl + num_ul
    total = num_users**width
    if total <= cap:
        vectors = itertools.product(range(num_users), repeat=width)
    else:
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        picked: set[tuple[int, ...]] = set()
        while len(picked) < cap:
            draw = rng.integers(num_users, size=(cap - len(picked), width))
            picked.update(map(tuple, draw.tolist()))
        vectors = sorted(picked)
    return [Allocation(tuple(vec[:num_dl]), tuple(vec[num_dl:]), num_users) for vec in vectors]


def owner_table(actions: list[Allocation]) -> np.ndarray:
    """(N_a, S + V) local owner indices, downlink RBs first."""
    return np.array([a.downlink + a.uplink for a in actions], dtype=int)
