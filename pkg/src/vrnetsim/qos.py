"""Transmission delays, deadline success, and success-probability gains.

All functions accept numpy arrays as well as scalars. A link that received no
resource block has rate 0, infinite delay, and therefore fails its slot.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from vrnetsim.correlation import Format
from vrnetsim.errors import ContractViolation


@dataclass(frozen=True)
class SlotOutcome:
    downlink_delay: float
    uplink_delay: float
    success: int
    content: int = -1
    format: Format = Format.VISIBLE_120


@dataclass(frozen=True)
class SuccessEstimate:
    probability: float
    horizon: int


def _safe_div(num, den):
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        out = np.where(den > 0, num / np.where(den > 0, den, 1.0), np.inf)
    out = np.where(num == 0, 0.0, out)
    return float(out) if out.ndim == 0 else out


def downlink_delay(g120, rate_down, backhaul_payload, requesters, per_user_backhaul):
    """Radio delay of the visible content plus the shared backhaul delay.

    The backhaul transfer of ``backhaul_payload`` bits is pooled over the
    ``requesters`` users asking for the same content at the SBS.
    """
    radio = _safe_div(g120, rate_down)
    wired = np.asarray(backhaul_payload, dtype=float) / (
        np.asarray(requesters, dtype=float) * np.asarray(per_user_backhaul, dtype=float))
    out = radio + wired
    return float(out) if np.ndim(out) == 0 else out


def uplink_delay(tracking_bits, rate_up):
    return _safe_div(tracking_bits, rate_up)


def success_indicator(d_down, d_up, gamma_d):
    out = (np.asarray(d_down) + np.asarray(d_up) <= gamma_d).astype(int)
    return int(out) if out.ndim == 0 else out


def success_probability(outcomes) -> SuccessEstimate:
    """Fraction of successful slots over the horizon.

    ``outcomes`` may hold :class:`SlotOutcome` objects or plain 0/1 flags.
    """
    flags = [o.success if isinstance(o, SlotOutcome) else int(o) for o in outcomes]
    if not flags:
        raise ContractViolation("success probability needs at least one slot")
    return SuccessEstimate(sum(flags) / len(flags), len(flags))


@dataclass
class SlotHistory:
    """Per-slot quantities of one user over a T-slot horizon.

    Attributes:
        dl_rate: (T,) downlink rate from the user's current downlink RBs.
        ul_rate: (T,) uplink rate from the user's current uplink RBs.
        tracking_bits: Tracking payload per slot, scalar or (T,).
        g120: Visible-content size in bits.
        backhaul_payload: (T,) bits shipped over the backhaul for the
            requested content under the chosen format.
        requesters: (T,) users at the SBS requesting the same content.
        per_user_backhaul: Backhaul share of one user in bit/s.
        gamma_d: Delay deadline in seconds.
    """

    dl_rate: np.ndarray
    ul_rate: np.ndarray
    tracking_bits: np.ndarray | float
    g120: float
    backhaul_payload: np.ndarray
    requesters: np.ndarray
    per_user_backhaul: float
    gamma_d: float

    def __post_init__(self):
        self.dl_rate = np.asarray(self.dl_rate, dtype=float)
        self.ul_rate = np.asarray(self.ul_rate, dtype=float)
        self.backhaul_payload = np.broadcast_to(
            np.asarray(self.backhaul_payload, dtype=float), self.dl_rate.shape)
        self.requesters = np.broadcast_to(np.asarray(self.requesters, dtype=float),
                                          self.dl_rate.shape)

    @property
    def horizon(self) -> int:
        return len(self.dl_rate)

    def downlink_delays(self, dl_rate=None, payload=None):
        return downlink_delay(self.g120, self.dl_rate if dl_rate is None else dl_rate,
                              self.backhaul_payload if payload is None else payload,
                              self.requesters, self.per_user_backhaul)

    def uplink_delays(self, ul_rate=None):
        return uplink_delay(self.tracking_bits, self.ul_rate if ul_rate is None else ul_rate)

    def successes(self, dl_rate=None, ul_rate=None, payload=None) -> np.ndarray:
        return np.atleast_1d(success_indicator(self.downlink_delays(dl_rate, payload),
                                               self.uplink_delays(ul_rate), self.gamma_d))

    def probability(self, **kwargs) -> float:
        return float(self.successes(**kwargs).mean())


def _window_gain(rate, delta_rate, need) -> np.ndarray:
    # slots whose rate was short of ``need`` and is lifted to it by ``delta_rate``
    return (need - delta_rate <= rate) & (rate < need)


def gain_uplink_rbs(history: SlotHistory, delta_rate) -> float:
    """Success-probability gain from extra uplink rate ``delta_rate`` per slot.

    A slot flips to success when the uplink rate crosses the rate needed to
    push the tracking data through in the time the downlink leaves over.
    Slots whose downlink alone misses the deadline contribute nothing.
    """
    slack = history.gamma_d - history.downlink_delays()
    bits = np.broadcast_to(np.asarray(history.tracking_bits, dtype=float), slack.shape)
    ok = slack > 0
    need = np.where(ok, bits / np.where(ok, slack, 1.0), np.inf)
    hits = ok & _window_gain(history.ul_rate, np.asarray(delta_rate, dtype=float), need)
    return float(hits.mean())


def gain_downlink_rbs(history: SlotHistory, delta_rate) -> float:
    """Success-probability gain from extra downlink rate ``delta_rate`` per slot."""
    wired = history.backhaul_payload / (history.requesters * history.per_user_backhaul)
    slack = history.gamma_d - history.uplink_delays() - wired
    ok = slack > 0
    need = np.where(ok, history.g120 / np.where(ok, slack, 1.0), np.inf)
    hits = ok & _window_gain(history.dl_rate, np.asarray(delta_rate, dtype=float), need)
    return float(hits.mean())


def gain_format_change(history: SlotHistory, m120, m360) -> float:
    """Gain from shipping the smaller of the two backhaul payloads instead of the larger.

    Per slot, the backhaul budget left after the radio legs, in bits, decides
    whether the smaller payload fits while the larger one does not. Slots where
    both payloads are equal contribute nothing.
    """
    m120 = np.broadcast_to(np.asarray(m120, dtype=float), history.dl_rate.shape)
    m360 = np.broadcast_to(np.asarray(m360, dtype=float), history.dl_rate.shape)
    radio = _safe_div(history.g120, history.dl_rate)
    budget = (history.gamma_d - radio - history.uplink_delays()) * (
        history.requesters * history.per_user_backhaul)
    small, large = np.minimum(m120, m360), np.maximum(m120, m360)
    hits = (m120 != m360) & (small <= budget) & (budget < large)
    return float(hits.mean())
