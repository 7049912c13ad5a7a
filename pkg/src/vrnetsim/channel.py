"""Path loss, Rayleigh fading, SINR and Shannon rates for OFDMA links.

Every SBS reuses every downlink RB, so downlink interference comes from all
other SBSs. Uplink interference on RB ``k`` at SBS ``j`` comes from the users
that other SBSs scheduled on their own uplink RB ``k``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from vrnetsim.errors import ConfigError
from vrnetsim.topology import Topology

D_MIN = 1.0  # meters


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def path_gain(distance, fading, beta: float, d_min: float = D_MIN):
    """``fading * max(distance, d_min) ** -beta``; works on scalars and arrays."""
    d = np.maximum(distance, d_min)
    out = fading * d ** (-beta)
    return float(out) if np.ndim(out) == 0 else out


def draw_fading(rng: np.random.Generator, shape) -> np.ndarray:
    """Unit-mean exponential power gains (Rayleigh amplitude)."""
    return rng.exponential(1.0, size=shape)


@dataclass(frozen=True)
class ChannelRealization:
    """Fading draw for one slot plus the radio constants it is used with.

    ``downlink_gain[i, j, k]`` is the fading power between user ``i`` and SBS
    ``j`` on downlink RB ``k``; ``uplink_gain`` is the same on uplink RBs.
    """

    downlink_gain: np.ndarray
    uplink_gain: np.ndarray
    beta: float
    noise_power: float
    rb_bandwidth: float
    sbs_power: float
    user_power: float
    d_min: float = D_MIN

    def __post_init__(self):
        if np.any(self.downlink_gain <= 0) or np.any(self.uplink_gain <= 0):
            raise ValueError("fading gains must be positive")
        if not self.noise_power > 0:
            raise ValueError("noise power must be positive")

    @classmethod
    def draw(cls, rng, num_users, num_sbs, num_dl_rbs, num_ul_rbs, **params):
        return cls(draw_fading(rng, (num_users, num_sbs, num_dl_rbs)),
                   draw_fading(rng, (num_users, num_sbs, num_ul_rbs)), **params)


def sinr_downlink(user: int, sbs: int, rb: int, topology: Topology,
                  channel: ChannelRealization) -> float:
    d = topology.distances[user]
    h = path_gain(d, channel.downlink_gain[user, :, rb], channel.beta, channel.d_min)
    rx = channel.sbs_power * h
    interference = rx.sum() - rx[sbs]
    return float(rx[sbs] / (channel.noise_power + interference))


def sinr_uplink(user: int, sbs: int, rb: int, topology: Topology,
                channel: ChannelRealization, uplink_owners: np.ndarray) -> float:
    """Uplink SINR of ``user`` at ``sbs`` on uplink RB ``rb``.

    ``uplink_owners[m, k]`` is the global user that SBS ``m`` scheduled on its
    uplink RB ``k`` (negative when the RB is idle). Owners at ``sbs`` itself
    are not interferers.
    """
    interference = 0.0
    for m, owner in enumerate(uplink_owners[:, rb]):
        if m == sbs or owner < 0:
            continue
        h = path_gain(topology.distances[owner, sbs], channel.uplink_gain[owner, sbs, rb],
                      channel.beta, channel.d_min)
        interference += channel.user_power * h
    h = path_gain(topology.distances[user, sbs], channel.uplink_gain[user, sbs, rb],
                  channel.beta, channel.d_min)
    return float(channel.user_power * h / (channel.noise_power + interference))


def rate(alloc_row, sinrs, rb_bandwidth: float) -> float:
    """Shannon rate summed over the RBs flagged in ``alloc_row`` (bit/s)."""
    alloc_row = np.asarray(alloc_row)
    sinrs = np.asarray(sinrs, dtype=float)
    if alloc_row.shape != sinrs.shape:
        raise ValueError("allocation and SINR vectors differ in length")
    return float(np.sum(alloc_row * rb_bandwidth * np.log2(1.0 + sinrs)))


rate_downlink = rate
rate_uplink = rate


def backhaul_rate(total_backhaul: float, num_users: int) -> float:
    """Equal share of the cloud backhaul per user."""
    if num_users < 1:
        raise ConfigError("num_users", "backhaul share needs at least one user")
    return total_backhaul / num_users


def downlink_sinr_batch(distances: np.ndarray, association: np.ndarray, fading: np.ndarray,
                        sbs_power: float, noise_power: float, beta: float,
                        d_min: float = D_MIN) -> np.ndarray:
    """Downlink SINR for every user on every RB and slot.

    Args:
        distances: (U, K) user-to-SBS distances.
        association: (U,) serving SBS per user.
        fading: (U, K, S, H) fading powers over H slots.

    Returns:
        (U, S, H) SINR of each user towards its serving SBS.
    """
    pl = np.maximum(distances, d_min) ** (-beta)
    rx = sbs_power * fading * pl[:, :, None, None]
    own = rx[np.arange(len(association)), association]
    return own / (noise_power + rx.sum(axis=1) - own)


def uplink_sinr_batch(owners: np.ndarray, uplink_rx: np.ndarray, noise_power: float) -> np.ndarray:
    """Uplink SINR at every SBS on every RB for one joint schedule.

    Args:
        owners: (K, V) global user scheduled on each SBS's uplink RB, or -1
            for an idle RB (SBS without users).
        uplink_rx: (U, K, V, H) received power ``P_U * h`` of each user at
            each SBS.

    Returns:
        (K, V, H) SINR of each scheduled uplink (0 on idle RBs).
    """
    k_sbs, v = owners.shape
    idx = np.maximum(owners, 0)
    rx = uplink_rx[idx[:, None, :], np.arange(k_sbs)[None, :, None], np.arange(v)[None, None, :]]
    # rx[m, j, k]: power from SBS m's owner of RB k received at SBS j
    if np.any(owners < 0):
        rx = rx * (owners >= 0)[:, None, :, None]
    total = rx.sum(axis=0)
    own = rx[np.arange(k_sbs), np.arange(k_sbs)]
    return own / (noise_power + total - own)
