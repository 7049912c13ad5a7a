import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vrnetsim.channel import (ChannelRealization, backhaul_rate, dbm_to_watts, downlink_sinr_batch,
                              draw_fading, path_gain, rate, sinr_downlink, sinr_uplink,
                              uplink_sinr_batch)
from vrnetsim.errors import ConfigError
from vrnetsim.topology import Topology

NOISE = dbm_to_watts(-105.0)


def _channel(u, k, s, v, seed=0, **kw):
    params = dict(beta=3.0, noise_power=NOISE, rb_bandwidth=1.8e6, sbs_power=1.0, user_power=0.1)
    params.update(kw)
    return ChannelRealization.draw(np.random.default_rng(seed), u, k, s, v, **params)


def test_path_gain_values():
    assert path_gain(1.0, 1.0, 2.0) == 1.0
    assert path_gain(10.0, 1.0, 2.0) == pytest.approx(0.01, rel=1e-15)
    assert path_gain(0.05, 1.0, 2.0) == 1.0  # clamped to 1 m


def test_dbm_conversion():
    assert dbm_to_watts(30.0) == pytest.approx(1.0)
    assert dbm_to_watts(20.0) == pytest.approx(0.1)
    assert dbm_to_watts(-105.0) == pytest.approx(10 ** -13.5)


def test_single_sbs_downlink_has_no_interference():
    topo = Topology.from_positions([[0.0, 0.0]], [[30.0, 40.0]], 500.0)
    ch = _channel(1, 1, 5, 5)
    h = path_gain(50.0, ch.downlink_gain[0, 0, 2], 3.0)
    assert sinr_downlink(0, 0, 2, topo, ch) == pytest.approx(h / NOISE, rel=1e-12)


def test_equal_gain_interferer_below_one():
    topo = Topology.from_positions([[-10.0, 0.0], [10.0, 0.0]], [[0.0, 0.0]], 500.0)
    gain = np.ones((1, 2, 1))
    ch = ChannelRealization(gain, gain, 3.0, NOISE, 1.8e6, 1.0, 0.1)
    h = 10.0**-3
    expected = h / (NOISE + h)
    got = sinr_downlink(0, 0, 0, topo, ch)
    assert got == pytest.approx(expected, rel=1e-12)
    assert got < 1


def test_rate_examples():
    assert rate([0, 0], [3.0, 3.0], 1.8e6) == 0.0
    assert rate([1], [3.0], 1.8e6) == pytest.approx(3.6e6, rel=1e-15)
    assert rate([1, 1], [3.0, 3.0], 1.8e6) == 2 * rate([1], [3.0], 1.8e6)


def test_uplink_without_cochannel_user():
    topo = Topology.from_positions([[0.0, 0.0], [200.0, 0.0]], [[10.0, 0.0], [190.0, 0.0]], 500.0)
    ch = _channel(2, 2, 5, 5)
    owners = np.array([[0, 0, 0, 0, 0], [-1, -1, -1, -1, -1]])
    h = path_gain(10.0, ch.uplink_gain[0, 0, 1], 3.0)
    assert sinr_uplink(0, 0, 1, topo, ch, owners) == pytest.approx(0.1 * h / NOISE, rel=1e-12)
    assert rate([0] * 5, np.ones(5), 1.8e6) == 0.0


def test_uplink_equal_cochannel_halves_ratio():
    topo = Topology.from_positions([[0.0, 0.0], [100.0, 0.0]], [[-10.0, 0.0], [10.0, 0.0]], 500.0)
    gain = np.ones((2, 2, 1))
    ch = ChannelRealization(gain, gain, 3.0, 1e-30, 1.8e6, 1.0, 0.1)
    owners = np.array([[0], [1]])
    # both users 10 m from SBS 0: SINR -> 1 as noise -> 0, against inf without the peer
    assert sinr_uplink(0, 0, 0, topo, ch, owners) == pytest.approx(1.0, rel=1e-9)


def test_backhaul_rate():
    assert backhaul_rate(10e9, 25) == pytest.approx(0.4e9)
    assert backhaul_rate(7.0, 1) == 7.0
    assert backhaul_rate(10e9, 50) == backhaul_rate(10e9, 25) / 2
    with pytest.raises(ConfigError):
        backhaul_rate(10e9, 0)


def test_fading_unit_mean():
    g = draw_fading(np.random.default_rng(11), 10**5)
    assert abs(g.mean() - 1.0) < 0.02
    assert np.all(g > 0)


def test_realization_rejects_nonpositive():
    with pytest.raises(ValueError):
        ChannelRealization(np.zeros((1, 1, 1)), np.ones((1, 1, 1)), 3.0, NOISE, 1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        ChannelRealization(np.ones((1, 1, 1)), np.ones((1, 1, 1)), 3.0, 0.0, 1.0, 1.0, 1.0)


def test_batches_match_scalar_versions():
    rng = np.random.default_rng(5)
    topo = Topology.from_positions(rng.uniform(-300, 300, (3, 2)), rng.uniform(-300, 300, (7, 2)), 500.0)
    ch = _channel(7, 3, 4, 4, seed=9)
    batch = downlink_sinr_batch(topo.distances, topo.association, ch.downlink_gain[..., None],
                                1.0, NOISE, 3.0)
    for i in range(7):
        for k in range(4):
            assert batch[i, k, 0] == pytest.approx(
                sinr_downlink(i, topo.association[i], k, topo, ch), rel=1e-12)
    owners = np.full((3, 4), -1)
    for j in range(3):
        users = topo.users_of(j)
        if len(users):
            owners[j] = users[rng.integers(len(users), size=4)]
    rx = 0.1 * ch.uplink_gain * np.maximum(topo.distances, 1.0)[:, :, None] ** -3.0
    ul = uplink_sinr_batch(owners, rx[..., None], NOISE)
    for j in range(3):
        for k in range(4):
            if owners[j, k] >= 0:
                assert ul[j, k, 0] == pytest.approx(
                    sinr_uplink(owners[j, k], j, k, topo, ch, owners), rel=1e-12)


@settings(max_examples=50, deadline=None)
@given(sinrs=st.lists(st.floats(0, 1e4), min_size=1, max_size=8), data=st.data())
def test_rate_monotone_in_rb_count(sinrs, data):
    n = len(sinrs)
    base = data.draw(st.lists(st.integers(0, 1), min_size=n, max_size=n))
    extra = data.draw(st.integers(0, n - 1))
    more = list(base)
    more[extra] = 1
    assert rate(more, sinrs, 1.8e6) >= rate(base, sinrs, 1.8e6) >= 0


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**31), drop=st.integers(0, 2))
def test_removing_interferer_never_lowers_sinr(seed, drop):
    rng = np.random.default_rng(seed)
    topo = Topology.from_positions(rng.uniform(-300, 300, (4, 2)), rng.uniform(-300, 300, (6, 2)), 500.0)
    ch = _channel(6, 4, 1, 1, seed=seed)
    owners = rng.integers(0, 6, size=(4, 1))
    victim = 3
    before = sinr_uplink(owners[victim, 0], victim, 0, topo, ch, owners)
    fewer = owners.copy()
    fewer[drop, 0] = -1
    after = sinr_uplink(owners[victim, 0], victim, 0, topo, ch, fewer)
    assert after >= before
    # downlink: zero an interfering SBS's gain
    gains = ch.downlink_gain.copy()
    user = 0
    serving = topo.association[user]
    other = (serving + 1) % 4
    before_dl = sinr_downlink(user, serving, 0, topo, ch)
    gains[user, other, 0] = 1e-300
    weaker = ChannelRealization(gains, ch.uplink_gain, 3.0, NOISE, 1.8e6, 1.0, 0.1)
    assert sinr_downlink(user, serving, 0, topo, weaker) >= before_dl
    assert math.isfinite(before_dl)
