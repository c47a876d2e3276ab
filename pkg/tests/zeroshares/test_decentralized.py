from __future__ import annotations

import math

import networkx as nx
import pytest

from privagg.exceptions import ProtocolError
from privagg.simnet import Topology
from privagg.zeroshares import (
    PairwiseKeyring,
    ShareRange,
    gcd_repair,
    one_round_decentralized,
    split_zero,
    two_round_relay,
)


def test_gcd_repair():
    assert gcd_repair(14, 35, 3, 20) == (16, 5, 18)
    assert gcd_repair(2, 35, 1, 1) == (2, 1, 1)


def test_split_zero(rng):
    out = split_zero([0, 1, 2], 1, ShareRange.mod_q(97), 2, rng)
    assert sorted(out) == [0, 1, 2]
    for k in range(2):
        assert sum(v[k] for v in out.values()) % 97 == 0

    out = split_zero([0, 3], 3, ShareRange.bounded(16), 1, rng)
    assert out[3][0] == -out[0][0]


@pytest.mark.parametrize("sealed", [False, True])
def test_one_round(rng, sealed):
    graph = Topology.complete(3).graph()
    keyring = PairwiseKeyring.provision(graph.nodes, rng) if sealed else None
    q = ShareRange.mod_q(2**16)
    res = one_round_decentralized(graph, 5, rng, q, dim=2, keyring=keyring)

    assert sorted(res.masks) == [0, 1, 2, 3]
    assert res.total(0) % 2**16 == 0
    assert res.total(1) % 2**16 == 0
    assert res.threshold == 3
    assert res.rounds == 1
    assert res.trace.total_bytes > 0

    rows = res.rows()
    assert len(rows) == 2
    assert all(r.t == 5 for r in rows)


def test_one_round_sparse(rng):
    graph = Topology.from_edges(4, [(1, 2)]).graph()
    res = one_round_decentralized(graph, 0, rng, ShareRange.bounded(32))
    assert res.total() == 0
    assert res.threshold == 1

    # agent 3 only talks to the aggregator
    pairs = {(m.sender, m.recipient) for m in res.trace.messages}
    assert (3, 0) in pairs
    assert (3, 1) not in pairs


def test_bad_graphs(rng):
    g = nx.Graph()
    g.add_nodes_from([0, 1, 2])
    g.add_edge(0, 1)
    with pytest.raises(ProtocolError):
        one_round_decentralized(g, 0, rng, ShareRange.bounded(8))

    g = nx.Graph([(1, 2)])
    with pytest.raises(ProtocolError):
        one_round_decentralized(g, 0, rng, ShareRange.bounded(8))


def test_two_round_relay(rng):
    topo = Topology.from_edges(4, [(1, 2), (3, 4)])
    graph = topo.graph()
    keyring = PairwiseKeyring.provision(graph.nodes, rng)
    res = two_round_relay(graph, 2, keyring, rng, ShareRange.mod_q(2**20), dim=3)

    assert res.threshold == 3
    assert res.rounds == 3
    for k in range(3):
        assert res.total(k) % 2**20 == 0

    by_kind = res.trace.bytes_by_kind()
    assert by_kind["relay"] > 0
    assert by_kind["forward"] == by_kind["relay"]
    for m in res.trace.messages:
        if m.kind == "share" and 0 not in (m.sender, m.recipient):
            edge = tuple(sorted((m.sender, m.recipient)))
            assert edge in topo.edges


def test_two_round_units(rng):
    graph = Topology.complete(5).graph()
    keyring = PairwiseKeyring.provision(graph.nodes, rng)
    for t in range(5):
        res = two_round_relay(
            graph, t, keyring, rng, ShareRange.mod_q(35), require_units=True
        )
        assert res.total() % 35 == 0
        for pid, (mask,) in res.masks.items():
            if pid != 0:
                assert math.gcd(mask, 35) == 1
        assert set(res.repaired) <= {1, 2, 3, 4, 5}


def test_two_round_units_need_modulus(rng):
    graph = Topology.complete(2).graph()
    keyring = PairwiseKeyring.provision(graph.nodes, rng)
    with pytest.raises(ValueError):
        two_round_relay(
            graph, 0, keyring, rng, ShareRange.bounded(16), require_units=True
        )


def test_rows_need_contiguous_agents(rng):
    graph = nx.relabel_nodes(Topology.complete(2).graph(), {2: 5})
    res = one_round_decentralized(graph, 0, rng, ShareRange.bounded(8))
    with pytest.raises(ValueError):
        res.rows()


def test_gcd_repair_every_residue():
    N = 35
    for s_i in range(N):
        s, own, to_agg = gcd_repair(s_i, N, 3, 20)
        assert math.gcd(s, N) == 1
        step = (s - s_i) % N
        assert step < 4
        assert own == (3 + step) % N
        assert (own + to_agg) % N == 23


def test_two_round_relay_on_path(rng):
    graph = nx.path_graph(5)
    keyring = PairwiseKeyring.provision(graph.nodes, rng)
    for t in range(3):
        res = two_round_relay(
            graph, t, keyring, rng, ShareRange.mod_q(35), require_units=True
        )
        assert sorted(res.masks) == [0, 1, 2, 3, 4]
        assert res.total() % 35 == 0
        assert res.threshold == 3
        for pid in (1, 2, 3, 4):
            assert math.gcd(res.masks[pid][0], 35) == 1

    # agents 2..4 reach the aggregator only through relays
    relayed = {m.sender for m in res.trace.messages if m.kind == "relay"}
    assert relayed <= {1, 2, 3, 4}
    assert relayed & {2, 3, 4}
