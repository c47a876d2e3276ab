from __future__ import annotations

import pytest

from privagg.crypto import encrypt, hom_scale
from privagg.exceptions import ProtocolError
from privagg.simnet import Message, Network, Participant, Topology, run_round


class Chatter(Participant):
    """Sends one message to each target in round 1, logs its inboxes."""

    def __init__(self, pid, targets=(), pk=None):
        super().__init__(pid)
        self.targets = targets
        self.pk = pk
        self.log = []

    def step(self, round_no, inbox):
        self.log.append((round_no, [(m.sender, m.payload) for m in inbox]))
        if self.pk is not None:
            hom_scale(encrypt(self.pk, 1, r=1), 3)
        if round_no == 1:
            payload = bytes([self.pid])
            return [Message(self.pid, r, "hello", payload) for r in self.targets]
        return []


def test_delivery_order():
    parts = [Chatter(0), Chatter(1, (3,)), Chatter(2, (3, 0)), Chatter(3)]
    net = Network(parts)
    net.run(2)

    assert parts[3].log == [(1, []), (2, [(1, b"\x01"), (2, b"\x02")])]
    assert parts[0].log[1] == (2, [(2, b"\x02")])
    assert net.trace.total_bytes == 3
    assert net.trace.rounds == 2
    assert [(m.sender, m.recipient) for m in net.trace.messages] == [
        (2, 0),
        (1, 3),
        (2, 3),
    ]


def test_topology_routes():
    topo = Topology.from_edges(3, [(1, 2)])
    parts = [Chatter(0), Chatter(1, (2, 0)), Chatter(2), Chatter(3, (0,))]
    Network(parts, topo).run(2)

    parts = [Chatter(0), Chatter(1, (3,)), Chatter(2), Chatter(3)]
    with pytest.raises(ProtocolError):
        Network(parts, topo).run(2)


def test_unregistered_and_forged():
    with pytest.raises(ProtocolError):
        Network([Chatter(0, (7,))]).run(2)

    class Forger(Participant):
        def step(self, round_no, inbox):  # noqa: ARG002
            return [Message(0, 1, "x", b"")]

    with pytest.raises(ProtocolError):
        run_round({1: Forger(1), 0: Participant(0)}, [])


def test_counters_per_handler(toy_key):
    parts = [Chatter(0), Chatter(1, pk=toy_key.public), Chatter(2)]
    net = Network(parts)
    net.run(2, phase="offline")
    net.run(1, phase="online")

    counters = net.trace.counters()
    assert counters[1].exps == 3
    assert counters[1].encs == 3
    assert counters[0].exps == 0
    assert net.trace.counters("offline")[1].exps == 2
    assert net.trace.counters("online")[1].exps == 1
    assert set(net.trace.phase_wall_ns) == {"offline", "online"}


def test_flush():
    parts = [Chatter(0), Chatter(1, (0,))]
    net = Network(parts)
    net.run(1)
    assert len(net.pending) == 1

    delta = net.flush()
    assert net.pending == []
    assert delta.total_bytes == 1
    assert [m.payload for m in parts[0].received] == [b"\x01"]
