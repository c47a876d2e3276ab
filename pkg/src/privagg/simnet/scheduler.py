"""Deterministic round-based message passing.

In each round every pending message is delivered, sorted by
``(recipient, sender)``, then every participant's :meth:`Participant.step`
runs once in ascending id order under its own operation counter. Messages
returned by the handlers are delivered in the next round.
"""

from __future__ import annotations

import logging
import time
from collections.abc import Iterable, Mapping
from dataclasses import dataclass

from ..crypto import OpCounter, counting
from ..exceptions import ProtocolError
from .network import AGGREGATOR, Topology
from .trace import HandlerRecord, MessageRecord, SimTrace

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Message:
    sender: int
    recipient: int
    kind: str
    payload: bytes

    @property
    def size(self) -> int:
        return len(self.payload)


class Participant:
    """A party of the simulation. Subclasses override :meth:`step`."""

    def __init__(self, pid: int) -> None:
        self.pid = pid
        self.received: list[Message] = []

    def step(self, round_no: int, inbox: list[Message]) -> list[Message]:  # noqa: ARG002
        return []

    def receive(self, msg: Message) -> None:
        """Hook for messages delivered by :meth:`Network.flush`."""
        self.received.append(msg)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(pid={self.pid})"


def _check_route(msg: Message, topology: Topology | None) -> None:
    if topology is None or AGGREGATOR in (msg.sender, msg.recipient):
        return
    a, b = sorted((msg.sender, msg.recipient))
    if (a, b) not in topology.edges:
        errmsg = f"no link between {msg.sender} and {msg.recipient}"
        raise ProtocolError(errmsg, msg.sender)


def run_round(
    participants: Mapping[int, Participant],
    pending: Iterable[Message],
    round_no: int = 0,
    topology: Topology | None = None,
    phase: str = "online",
) -> tuple[list[Message], SimTrace]:
    """Deliver `pending` and run every handler once.

    Returns
    -------
    the outbound messages and the trace delta of this round.
    """
    delta = SimTrace()
    inboxes: dict[int, list[Message]] = {pid: [] for pid in participants}

    for msg in sorted(pending, key=lambda m: (m.recipient, m.sender)):
        if msg.recipient not in participants:
            errmsg = f"message to unregistered participant {msg.recipient}"
            raise ProtocolError(errmsg, msg.sender, round_no)
        _check_route(msg, topology)
        inboxes[msg.recipient].append(msg)
        delta.messages.append(
            MessageRecord(round_no, msg.sender, msg.recipient, msg.kind, msg.size)
        )

    outbound: list[Message] = []
    for pid in sorted(participants):
        ops = OpCounter()
        start = time.perf_counter_ns()
        with counting(ops):
            out = participants[pid].step(round_no, inboxes[pid])
        wall = time.perf_counter_ns() - start
        delta.handlers.append(HandlerRecord(round_no, pid, ops, wall, phase))
        for m in out:
            if m.sender != pid:
                errmsg = f"participant {pid} forged sender {m.sender}"
                raise ProtocolError(errmsg, pid, round_no)
        outbound.extend(out)

    delta.phase_wall_ns[phase] = sum(h.wall_ns for h in delta.handlers)
    return outbound, delta


class Network:
    """Participants, their pending messages and the cumulative trace."""

    def __init__(
        self,
        participants: Iterable[Participant],
        topology: Topology | None = None,
    ) -> None:
        self.participants = {p.pid: p for p in participants}
        self.topology = topology
        self.pending: list[Message] = []
        self.trace = SimTrace()
        self.round_no = 0

    def run(self, rounds: int = 1, phase: str = "online") -> SimTrace:
        """Run `rounds` rounds, returning their combined trace delta."""
        delta = SimTrace()
        for _ in range(rounds):
            self.round_no += 1
            self.pending, d = run_round(
                self.participants, self.pending, self.round_no, self.topology, phase
            )
            log.debug(
                f"round {self.round_no}: {len(d.messages)} message(s) delivered, "
                f"{len(self.pending)} queued"
            )
            delta.extend(d)
        self.trace.extend(delta)
        return delta

    def flush(self) -> SimTrace:
        """Deliver pending messages to :meth:`receive` hooks without running a
        round. Used for messages that ride along with the next protocol."""
        delta = SimTrace()
        for msg in sorted(self.pending, key=lambda m: (m.recipient, m.sender)):
            if msg.recipient not in self.participants:
                errmsg = f"message to unregistered participant {msg.recipient}"
                raise ProtocolError(errmsg, msg.sender, self.round_no)
            _check_route(msg, self.topology)
            self.participants[msg.recipient].receive(msg)
            delta.messages.append(
                MessageRecord(
                    self.round_no, msg.sender, msg.recipient, msg.kind, msg.size
                )
            )
        self.pending = []
        self.trace.extend(delta)
        return delta
