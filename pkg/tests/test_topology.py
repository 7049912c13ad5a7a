import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vrnetsim.errors import ConfigError
from vrnetsim.topology import Topology, associate, distance_matrix, generate_topology


def test_standard_layout_within_disc():
    topo = generate_topology(5, 25, 500.0, seed=7)
    assert topo.sbs_positions.shape == (5, 2)
    assert topo.user_positions.shape == (25, 2)
    assert np.all(np.linalg.norm(topo.sbs_positions, axis=1) <= 500.0)
    assert np.all(np.linalg.norm(topo.user_positions, axis=1) <= 500.0)


def test_single_pair():
    topo = generate_topology(1, 1, 500.0, seed=0)
    assert topo.association.tolist() == [0]


def test_same_seed_bit_identical():
    a = generate_topology(5, 25, 500.0, seed=3)
    b = generate_topology(5, 25, 500.0, seed=3)
    assert a.sbs_positions.tobytes() == b.sbs_positions.tobytes()
    assert a.user_positions.tobytes() == b.user_positions.tobytes()


@pytest.mark.parametrize("args,key", [((0, 5, 500.0), "num_sbs"), ((5, 0, 500.0), "num_users"),
                                      ((5, 5, 0.0), "area_radius")])
def test_bad_arguments_name_key(args, key):
    with pytest.raises(ConfigError) as err:
        generate_topology(*args, seed=0)
    assert err.value.key == key


def test_tie_goes_to_lowest_index():
    # user equidistant from SBSs 1 and 3 only
    sbs = [[50.0, 0.0], [0.0, 2.0], [9.0, 9.0], [0.0, -2.0]]
    tie = Topology.from_positions(sbs, [[0.0, 0.0]], 100.0)
    assert tie.distances[0, 1] == tie.distances[0, 3]
    assert tie.association[0] == 1


def test_user_at_sbs_position():
    topo = Topology.from_positions([[3.0, 4.0], [100.0, 0.0]], [[100.0, 0.0]], 500.0)
    assert topo.association[0] == 1


def test_partition_sums_to_users():
    topo = generate_topology(5, 25, 500.0, seed=7)
    assert sum(len(topo.users_of(j)) for j in range(5)) == 25


@settings(max_examples=60, deadline=None)
@given(k=st.integers(1, 9), u=st.integers(1, 40), seed=st.integers(0, 2**32 - 1))
def test_association_is_nearest_partition(k, u, seed):
    topo = generate_topology(k, u, 500.0, seed=seed)
    d = topo.distances
    chosen = d[np.arange(u), topo.association]
    assert np.all(chosen[:, None] <= d)
    assert np.array_equal(associate(topo), topo.association)
    assert np.bincount(topo.association, minlength=k).sum() == u
    again = distance_matrix(topo.user_positions, topo.sbs_positions)
    np.testing.assert_allclose(again, d, rtol=1e-12)
