"""Uplink tracking covariance and downlink field-of-view overlap.

A visible content is modeled as a single arc of ``view_width`` degrees on the
yaw circle. The n-way overlap coefficient of a group of requesters is the arc
length shared by all of them divided by ``view_width``; summing those with
alternating signs gives the measure of the union of the requested arcs, which
is what the cloud must ship when it sends visible content.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from vrnetsim.errors import ContractViolation

FULL_CIRCLE = 360.0


class Format(str, enum.Enum):
    VISIBLE_120 = "visible120"
    FULL_360 = "full360"


@dataclass(frozen=True)
class UserTrackingModel:
    sigma: float = 1.0
    mu: float = 0.0
    alpha: float = 2.0
    kappa: float = 5.0

    def __post_init__(self):
        if not (self.sigma > 0 and self.alpha > 0 and self.kappa > 0):
            raise ValueError("sigma, alpha and kappa must be positive")


@dataclass(frozen=True)
class ViewState:
    content_id: int
    view_center: float
    view_width: float = 120.0

    def __post_init__(self):
        if not 0 < self.view_width <= FULL_CIRCLE:
            raise ValueError("view_width must lie in (0, 360]")

    @property
    def start(self) -> float:
        return (self.view_center - self.view_width / 2.0) % FULL_CIRCLE


@dataclass
class CorrelationSets:
    """Overlap coefficients of one content's requesters.

    ``by_order[n]`` lists the coefficients of every n-subset of the
    ``num_users`` requesters, in ``itertools.combinations`` order.
    """

    num_users: int
    by_order: dict[int, list[float]] = field(default_factory=dict)

    def subsets(self, n: int):
        return itertools.combinations(range(self.num_users), n)


def covariance(sigma_i: float, sigma_j: float, distance: float, alpha: float, kappa: float) -> float:
    """Power-exponential covariance of two users' tracking data."""
    return sigma_i * sigma_j * math.exp(-(distance**alpha) / kappa)


def covariance_matrix(positions: np.ndarray, sigmas: np.ndarray, alpha: float,
                      kappa: float) -> np.ndarray:
    diff = positions[:, None, :] - positions[None, :, :]
    d = np.sqrt((diff**2).sum(axis=-1))
    return np.outer(sigmas, sigmas) * np.exp(-(d**alpha) / kappa)


def sigma_max(user: int, co_associated, positions: np.ndarray, models) -> float:
    """Largest covariance between ``user`` and any other user at its SBS.

    Returns 0 when the user is alone at its SBS.
    """
    best = 0.0
    me = models[user]
    for k in co_associated:
        if k == user:
            continue
        d = float(np.hypot(*(positions[user] - positions[k])))
        best = max(best, covariance(me.sigma, models[k].sigma, d, me.alpha, me.kappa))
    return best


def tracking_data_size(sigma_max_value: float, k_min: float, k_max: float,
                       sigma_ref: float) -> float:
    """Tracking payload in bits, linear in ``sigma_max`` between two clamps."""
    frac = min(max(sigma_max_value, 0.0) / sigma_ref, 1.0)
    return k_min + (k_max - k_min) * frac


def _arc_intervals(start: float, width: float) -> list[tuple[float, float]]:
    if width >= FULL_CIRCLE:
        return [(0.0, FULL_CIRCLE)]
    end = start + width
    if end <= FULL_CIRCLE:
        return [(start, end)]
    return [(start, FULL_CIRCLE), (0.0, end - FULL_CIRCLE)]


def _intersect(a, b):
    out = []
    for lo1, hi1 in a:
        for lo2, hi2 in b:
            lo, hi = max(lo1, lo2), min(hi1, hi2)
            if hi > lo:
                out.append((lo, hi))
    return out


def arc_intersection_length(views) -> float:
    """Degrees of yaw covered by every view in ``views``."""
    common = None
    for v in views:
        iv = _arc_intervals(v.start, v.view_width)
        common = iv if common is None else _intersect(common, iv)
        if not common:
            return 0.0
    return sum(hi - lo for lo, hi in common)


def arc_union_length(views) -> float:
    """Degrees of yaw covered by at least one view (sweep over sorted pieces)."""
    pieces = sorted(iv for v in views for iv in _arc_intervals(v.start, v.view_width))
    total, cur_lo, cur_hi = 0.0, None, None
    for lo, hi in pieces:
        if cur_hi is None or lo > cur_hi:
            if cur_hi is not None:
                total += cur_hi - cur_lo
            cur_lo, cur_hi = lo, hi
        else:
            cur_hi = max(cur_hi, hi)
    if cur_hi is not None:
        total += cur_hi - cur_lo
    return total


def overlap_sets(views) -> CorrelationSets:
    """n-way overlap coefficients for every subset of at least two views."""
    views = list(views)
    if len({v.content_id for v in views}) > 1:
        raise ContractViolation("all views must reference the same content")
    if len({v.view_width for v in views}) > 1:
        raise ContractViolation("all views must share one view width")
    sets = CorrelationSets(len(views))
    if not views:
        return sets
    width = views[0].view_width
    for n in range(2, len(views) + 1):
        # clamp away float rounding on coincident arcs
        sets.by_order[n] = [min(arc_intersection_length([views[i] for i in combo]) / width, 1.0)
                            for combo in itertools.combinations(range(len(views)), n)]
    return sets


def visible_union_size(sets: CorrelationSets, g120: float) -> float:
    """Bits the cloud ships for all requested visible portions of a content.

    Inclusion-exclusion over the overlap coefficients:
    ``g120 * (U - sum(C2) + sum(C3) - ...)``.
    """
    u = sets.num_users
    if u < 1:
        raise ContractViolation("at least one requester is needed")
    total = float(u)
    for n in range(2, u + 1):
        coeffs = sets.by_order.get(n)
        if coeffs is None or len(coeffs) != math.comb(u, n):
            raise ContractViolation(f"correlation set of order {n} is incomplete")
        total += (-1) ** (n - 1) * math.fsum(coeffs)
    return g120 * total


def choose_format(g360: float, l_a: float) -> tuple[Format, float]:
    """Ship visible content iff it is no larger than the full frame.

    Returns the chosen format and the backhaul payload ``min(g360, l_a)``.
    """
    if g360 >= l_a:
        return Format.VISIBLE_120, l_a
    return Format.FULL_360, g360
