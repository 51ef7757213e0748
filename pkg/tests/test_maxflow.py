import numpy as np
import pytest

from uscut.radial import FlowNetwork, build_flow_network
from uscut.maxflow import max_flow_min_cut

from oracles import brute_force_min_cut
from test_radial import make_grid


def net_from_arcs(num_interior, arcs, inf_cap=None):
    tails = np.array([a[0] for a in arcs], np.int32)
    heads = np.array([a[1] for a in arcs], np.int32)
    caps = np.array([a[2] for a in arcs], np.float64)
    if inf_cap is None:
        inf_cap = float(caps.sum()) + 2.0
    return FlowNetwork(num_interior=num_interior, tails=tails, heads=heads,
                       caps=caps, inf_cap=inf_cap)


def test_single_arc():
    net = net_from_arcs(0, [(0, 1, 5.0)])  # s=0, t=1
    cut = max_flow_min_cut(net)
    assert cut.max_flow_value == 5.0
    assert cut.cut_capacity == 5.0
    assert cut.source_side.shape == (0,)


def test_two_arc_chain():
    # s=1, t=2, interior v=0
    net = net_from_arcs(1, [(1, 0, 3.0), (0, 2, 7.0)])
    cut = max_flow_min_cut(net)
    assert cut.max_flow_value == 3.0
    assert not cut.source_side[0]  # s->v saturated, v lands on the sink side


def test_minimal_source_side_on_ties():
    # s=2 -> a=0 -> b=1 -> t=3, all capacity 1: three minimum cuts exist;
    # residual reachability returns the smallest source side (empty)
    net = net_from_arcs(2, [(2, 0, 1.0), (0, 1, 1.0), (1, 3, 1.0)])
    cut = max_flow_min_cut(net)
    assert cut.max_flow_value == 1.0
    assert not cut.source_side.any()


def test_negative_capacity_rejected():
    with pytest.raises(ValueError):
        max_flow_min_cut(net_from_arcs(0, [(0, 1, -1.0)]))


def random_network(rng):
    n = int(rng.integers(1, 11))
    s, t = n, n + 1
    m = int(rng.integers(1, 3 * n + 4))
    arcs = []
    for _ in range(m):
        u = int(rng.integers(0, n + 2))
        v = int(rng.integers(0, n + 2))
        if u == v or u == t or v == s:
            continue
        arcs.append((u, v, float(rng.integers(0, 21))))
    arcs.append((s, int(rng.integers(0, n)), float(rng.integers(0, 21))))
    arcs.append((int(rng.integers(0, n)), t, float(rng.integers(0, 21))))
    return net_from_arcs(n, arcs)


def test_flow_matches_brute_force_partitions():
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        net = random_network(rng)
        cut = max_flow_min_cut(net)
        expect = brute_force_min_cut(net.num_interior, net.tails, net.heads, net.caps)
        assert cut.max_flow_value == expect
        assert cut.cut_capacity == expect  # exact duality at integer capacities


def test_determinism():
    rng = np.random.default_rng(99)
    for _ in range(50):
        net = random_network(rng)
        a = max_flow_min_cut(net)
        b = max_flow_min_cut(net)
        assert a.max_flow_value == b.max_flow_value
        assert np.array_equal(a.source_side, b.source_side)


def test_no_infinite_arc_crosses_cut():
    rng = np.random.default_rng(5)
    for _ in range(20):
        costs = rng.integers(0, 40, (6, 5)).astype(float)
        net = build_flow_network(make_grid(costs), int(rng.integers(0, 3)))
        cut = max_flow_min_cut(net)
        side = np.concatenate([cut.source_side, [True, False]])
        crossing = side[net.tails] & ~side[net.heads]
        assert not np.any(net.caps[crossing] == net.inf_cap)
        assert cut.cut_capacity < net.inf_cap
