"""One period of the VR network as seen by the learning agents.

A period fixes the request distributions, and this module draws a history of
``H`` slots (fading, requested contents, view directions) once per period.
Everything that does not depend on the RB allocation is precomputed: per-RB
downlink rates, uplink received powers, backhaul delays after the format
decision, and tracking payloads. Scoring a joint allocation then only needs
the users' rates, so repeated joint actions are answered from a cache.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from vrnetsim.channel import D_MIN, downlink_sinr_batch, draw_fading, uplink_sinr_batch
from vrnetsim.correlation import (Format, ViewState, arc_union_length, choose_format,
                                  tracking_data_size)
from vrnetsim.topology import Topology


@dataclass(frozen=True)
class ScenarioParams:
    """Physical and traffic parameters of a period (SI units, bits, seconds)."""

    num_dl_rbs: int = 5
    num_ul_rbs: int = 5
    rb_bandwidth: float = 1.8e6
    sbs_power: float = 1.0
    user_power: float = 0.1
    noise_power: float = 10 ** (-13.5)
    beta: float = 3.0
    d_min: float = D_MIN
    g120: float = 12e6
    g360: float = 50e6
    k_min: float = 0.1e6
    k_max: float = 1e6
    sigma_ref: float = 1.0
    sigma_max_scale: float = 1.0
    tracking_sigma: float = 1.0
    alpha: float = 2.0
    kappa: float = 5.0
    backhaul_rate: float = 10e9
    gamma_d: float = 0.02
    num_contents: int = 10
    dirichlet_alpha: float = 1.0
    view_width: float = 120.0
    view_concentration: float = 0.0
    history_slots: int = 200


def user_sigma_max(topology: Topology, sigma: float, alpha: float, kappa: float) -> np.ndarray:
    """Largest tracking covariance of every user against its co-associated peers."""
    d = topology.user_distances()
    cov = sigma * sigma * np.exp(-(d**alpha) / kappa)
    same = topology.association[:, None] == topology.association[None, :]
    np.fill_diagonal(same, False)
    return np.where(same, cov, 0.0).max(axis=1)


@dataclass
class PeriodStats:
    """Allocation-independent quantities of one period.

    Per-user arrays are (U,), per-SBS arrays (K,), per-slot arrays (U, H).
    ``formats[(sbs, content)]`` counts [visible, full-frame] decisions.
    """

    sigma_max: np.ndarray
    tracking_bits: np.ndarray
    backhaul_delay: np.ndarray
    format_360_fraction: np.ndarray
    mean_visible_size: np.ndarray
    requests: np.ndarray
    view_centers: np.ndarray
    formats: dict = field(default_factory=dict)


class PeriodEnvironment:
    """Scores joint RB allocations against one period's slot history.

    Args:
        topology: Network layout.
        params: Scenario parameters.
        period_rng: Generator for this period's fading draws.
        request_rng: Generator for this period's request and view draws.
        correlation_aware: If False, the cloud always ships the full frame
            without pooling requesters and every user sends ``k_max`` bits.
    """

    def __init__(self, topology: Topology, params: ScenarioParams,
                 period_rng: np.random.Generator, request_rng: np.random.Generator,
                 correlation_aware: bool = True):
        self.topology = topology
        self.params = params
        self.correlation_aware = correlation_aware
        p = params
        u, k, h = topology.num_users, topology.num_sbs, p.history_slots
        self.assoc = topology.association
        dl_fading = draw_fading(period_rng, (u, k, p.num_dl_rbs, h))
        ul_fading = draw_fading(period_rng, (u, k, p.num_ul_rbs, h))
        sinr = downlink_sinr_batch(topology.distances, self.assoc, dl_fading,
                                   p.sbs_power, p.noise_power, p.beta, p.d_min)
        self.dl_rb_rate = p.rb_bandwidth * np.log2(1.0 + sinr)  # (U, S, H)
        pl = np.maximum(topology.distances, p.d_min) ** (-p.beta)
        self.uplink_rx = p.user_power * ul_fading * pl[:, :, None, None]  # (U, K, V, H)
        self.stats = self._draw_requests(request_rng)
        self.slack = p.gamma_d - self.stats.backhaul_delay  # (U, H)
        self._cache: dict[tuple, tuple[np.ndarray, np.ndarray]] = {}

    def _draw_requests(self, rng: np.random.Generator) -> PeriodStats:
        p, topo = self.params, self.topology
        u, k, h = topo.num_users, topo.num_sbs, p.history_slots
        q = rng.dirichlet(np.full(p.num_contents, p.dirichlet_alpha), size=u)
        cum = np.cumsum(q, axis=1)
        cum[:, -1] = 1.0
        req = (rng.random((u, h))[:, :, None] > cum[:, None, :]).sum(axis=2)
        hotspot = rng.uniform(0.0, 360.0, size=p.num_contents)
        if p.view_concentration > 0:
            jitter = np.degrees(rng.vonmises(0.0, p.view_concentration, size=(u, h)))
        else:
            jitter = rng.uniform(0.0, 360.0, size=(u, h))
        centers = (hotspot[req] + jitter) % 360.0

        per_user_bh = p.backhaul_rate / u
        smax = user_sigma_max(topo, p.tracking_sigma, p.alpha, p.kappa) * p.sigma_max_scale
        if self.correlation_aware:
            bits = np.array([tracking_data_size(s, p.k_min, p.k_max, p.sigma_ref) for s in smax])
        else:
            bits = np.full(u, p.k_max)
        bh = np.empty((u, h))
        n360 = np.zeros(k)
        ngroups = np.zeros(k)
        la_sum = np.zeros(k)
        formats: dict[tuple[int, int], list[int]] = {}
        for j in range(k):
            users = topo.users_of(j)
            if len(users) == 0:
                continue
            for t in range(h):
                contents = req[users, t]
                for a in np.unique(contents):
                    group = users[contents == a]
                    if self.correlation_aware:
                        if len(group) == 1:
                            l_a = p.g120
                        else:
                            views = [ViewState(int(a), float(c), p.view_width)
                                     for c in centers[group, t]]
                            l_a = p.g120 * arc_union_length(views) / p.view_width
                        fmt, payload = choose_format(p.g360, l_a)
                        bh[group, t] = payload / (len(group) * per_user_bh)
                    else:
                        fmt, l_a = Format.FULL_360, p.g360
                        bh[group, t] = p.g360 / per_user_bh
                    full = fmt is Format.FULL_360
                    n360[j] += full
                    ngroups[j] += 1
                    la_sum[j] += l_a
                    formats.setdefault((j, int(a)), [0, 0])[full] += 1
        frac = np.divide(n360, ngroups, out=np.zeros(k), where=ngroups > 0)
        mean_la = np.divide(la_sum, ngroups, out=np.zeros(k), where=ngroups > 0)
        return PeriodStats(smax, bits, bh, frac, mean_la, req, centers, formats)

    def owners(self, local_actions) -> tuple[np.ndarray, np.ndarray]:
        """Global owner tables (K, S) and (K, V) from each SBS's local owner vector.

        ``local_actions[j]`` is a length ``S + V`` vector of local user indices,
        or None for an SBS without users (its RBs stay idle, marked -1).
        """
        p, topo = self.params, self.topology
        dl = np.full((topo.num_sbs, p.num_dl_rbs), -1)
        ul = np.full((topo.num_sbs, p.num_ul_rbs), -1)
        for j, vec in enumerate(local_actions):
            if vec is None:
                continue
            users = topo.users_of(j)
            vec = np.asarray(vec)
            dl[j] = users[vec[: p.num_dl_rbs]]
            ul[j] = users[vec[p.num_dl_rbs:]]
        return dl, ul

    def user_rates(self, dl_owner: np.ndarray, ul_owner: np.ndarray):
        """(U, H) downlink and uplink rates of every user under a joint schedule."""
        u = np.arange(self.topology.num_users)
        dl_mask = dl_owner[self.assoc] == u[:, None]
        ul_mask = ul_owner[self.assoc] == u[:, None]
        c_dl = np.einsum("us,ush->uh", dl_mask, self.dl_rb_rate)
        ul_sinr = uplink_sinr_batch(ul_owner, self.uplink_rx, self.params.noise_power)
        ul_rb_rate = self.params.rb_bandwidth * np.log2(1.0 + ul_sinr)  # (K, V, H)
        c_ul = np.einsum("uv,uvh->uh", ul_mask, ul_rb_rate[self.assoc])
        return c_dl, c_ul

    def successes(self, c_dl: np.ndarray, c_ul: np.ndarray) -> np.ndarray:
        """(U, H) deadline indicators; a user without RBs in a direction fails."""
        p = self.params
        with np.errstate(divide="ignore"):
            radio = np.where(c_dl > 0, p.g120 / np.where(c_dl > 0, c_dl, 1.0), np.inf)
            bits = self.stats.tracking_bits[:, None]
            up = np.where(c_ul > 0, bits / np.where(c_ul > 0, c_ul, 1.0),
                          np.where(bits == 0, 0.0, np.inf))
        return radio + up <= self.slack

    def evaluate(self, local_actions, key=None) -> tuple[np.ndarray, np.ndarray]:
        """Per-SBS utility (sum of user success probabilities) and per-user probability.

        ``key`` identifies the joint action for caching; pass the tuple of
        strategy indices.
        """
        if key is not None and key in self._cache:
            return self._cache[key]
        dl, ul = self.owners(local_actions)
        prob = self.successes(*self.user_rates(dl, ul)).mean(axis=1)
        util = np.bincount(self.assoc, weights=prob, minlength=self.topology.num_sbs)
        if key is not None:
            self._cache[key] = (util, prob)
        return util, prob
