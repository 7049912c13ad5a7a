"""Random network layout and nearest-SBS user association."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from vrnetsim.errors import ConfigError


@dataclass(frozen=True)
class Topology:
    """Planar positions of SBSs and users inside a deployment disc.

    Attributes:
        sbs_positions: (K, 2) array of SBS coordinates in meters.
        user_positions: (U, 2) array of user coordinates in meters.
        area_radius: Radius of the deployment disc in meters.
        association: (U,) array mapping each user to its serving SBS.
        distances: (U, K) user-to-SBS distances in meters.
    """

    sbs_positions: np.ndarray
    user_positions: np.ndarray
    area_radius: float
    association: np.ndarray
    distances: np.ndarray

    @property
    def num_sbs(self) -> int:
        return len(self.sbs_positions)

    @property
    def num_users(self) -> int:
        return len(self.user_positions)

    def users_of(self, sbs: int) -> np.ndarray:
        """Global indices of the users served by ``sbs``, ascending."""
        return np.flatnonzero(self.association == sbs)

    def user_distances(self) -> np.ndarray:
        """(U, U) pairwise user distances in meters."""
        diff = self.user_positions[:, None, :] - self.user_positions[None, :, :]
        return np.sqrt((diff**2).sum(axis=-1))

    def to_dict(self) -> dict:
        return {
            "sbs_positions": self.sbs_positions.tolist(),
            "user_positions": self.user_positions.tolist(),
            "area_radius": self.area_radius,
            "association": self.association.tolist(),
        }

    @classmethod
    def from_positions(cls, sbs_positions, user_positions, area_radius: float) -> "Topology":
        sbs = np.asarray(sbs_positions, dtype=float).reshape(-1, 2)
        users = np.asarray(user_positions, dtype=float).reshape(-1, 2)
        dist = distance_matrix(users, sbs)
        return cls(sbs, users, float(area_radius), _nearest(dist), dist)


def distance_matrix(users: np.ndarray, sbs: np.ndarray) -> np.ndarray:
    diff = users[:, None, :] - sbs[None, :, :]
    return np.sqrt((diff**2).sum(axis=-1))


def _nearest(dist: np.ndarray) -> np.ndarray:
    # argmin returns the first minimum, i.e. the lowest SBS index on ties
    return np.argmin(dist, axis=1).astype(int)


def sample_disc(rng: np.random.Generator, n: int, radius: float) -> np.ndarray:
    """Draw ``n`` points uniformly on a disc by inverse-CDF polar sampling."""
    r = radius * np.sqrt(rng.random(n))
    theta = 2.0 * np.pi * rng.random(n)
    return np.column_stack([r * np.cos(theta), r * np.sin(theta)])


def generate_topology(num_sbs: int, num_users: int, area_radius: float,
                      seed: int | np.random.Generator) -> Topology:
    """Place SBSs and users uniformly at random on a disc and associate them.

    Args:
        num_sbs: Number of small base stations, at least 1.
        num_users: Number of VR users, at least 1.
        area_radius: Radius of the deployment disc in meters.
        seed: Integer seed or an already-forked generator.

    Raises:
        ConfigError: On zero counts or a non-positive radius.
    """
    if num_sbs < 1:
        raise ConfigError("num_sbs", "must be at least 1")
    if num_users < 1:
        raise ConfigError("num_users", "must be at least 1")
    if not area_radius > 0:
        raise ConfigError("area_radius", "must be positive")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    sbs = sample_disc(rng, num_sbs, area_radius)
    users = sample_disc(rng, num_users, area_radius)
    return Topology.from_positions(sbs, users, area_radius)


def associate(topology: Topology) -> np.ndarray:
    """Nearest-SBS association; ties go to the lowest SBS index."""
    return _nearest(distance_matrix(topology.user_positions, topology.sbs_positions))
