"""Scheme runs on the round-based network simulator.

Round 1: every agent encrypts and sends its contribution to the aggregator.
Round 2: the aggregator decodes the messages and aggregates. Operation
counts and wall time are attributed to the participant whose handler ran.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field

from ..numeric import RandomSource
from ..simnet import AGGREGATOR, Message, Network, Participant, SimTrace, Topology
from .base import AggregationScheme, Contribution

log = logging.getLogger(__name__)


class _AgentNode(Participant):
    def __init__(
        self, scheme: AggregationScheme, pid: int, x, t: int, rng: RandomSource
    ) -> None:
        super().__init__(pid)
        self.scheme = scheme
        self.x = x
        self.t = t
        self.rng = rng
        self.contribution: Contribution | None = None

    def step(self, round_no: int, inbox: list[Message]) -> list[Message]:  # noqa: ARG002
        if round_no != 1:
            return []
        self.contribution = self.scheme.enc(self.pid, self.x, self.t, self.rng)
        return [
            Message(
                self.pid,
                AGGREGATOR,
                self.scheme.contribution_kind,
                self.contribution.to_bytes(),
            )
        ]


class _AggregatorNode(Participant):
    def __init__(self, scheme: AggregationScheme, t: int) -> None:
        super().__init__(AGGREGATOR)
        self.scheme = scheme
        self.t = t
        self.result: int | tuple[int, ...] | None = None

    def step(self, round_no: int, inbox: list[Message]) -> list[Message]:
        if round_no != 2:
            return []
        N = getattr(self.scheme, "N", None)
        contributions = [
            Contribution.from_bytes(m.payload, m.sender, self.t, m.kind, N)
            for m in inbox
        ]
        self.result = self.scheme.aggr_dec(contributions, self.t)
        return []


@dataclass(frozen=True)
class SimResult:
    aggregate: int | tuple[int, ...]
    oracle: int | tuple[int, ...]
    contributions: tuple[Contribution, ...]
    payload_bytes: int
    trace: SimTrace = field(repr=False, compare=False)

    @property
    def matches(self) -> bool:
        return self.aggregate == self.oracle


def simulate(
    instance: AggregationScheme,
    xs: Sequence,
    t: int = 0,
    rng: RandomSource | None = None,
    topology: Topology | None = None,
) -> SimResult:
    """Run one time step of `instance` through :class:`.Network`.

    Parameters
    ----------
    instance
        a set-up scheme with shares provisioned for `t`.
    xs
        one input per agent, agent ``i`` at position ``i − 1``.
    t
        time step.
    rng
        parent random source; each agent spawns its own stream.
    topology
        agent graph, only used to validate routes.

    Returns
    -------
    the aggregate, the plaintext oracle, the contributions, their payload
    size in ``κ``-bit units and the trace.
    """
    if rng is None:
        rng = RandomSource.cryptographic()
    agents = [
        _AgentNode(instance, i, x, t, rng.spawn(f"agent/{t}/{i}"))
        for i, x in enumerate(xs, 1)
    ]
    aggregator = _AggregatorNode(instance, t)
    net = Network([aggregator, *agents], topology)
    net.run(2, phase="online")

    contributions = tuple(a.contribution for a in agents)
    payload = sum(instance.payload_bytes(c) for c in contributions)
    log.debug(
        f"{instance.scheme_id} at t={t}: {net.trace.total_bytes} wire bytes, "
        f"{payload} payload bytes"
    )
    return SimResult(
        aggregator.result, instance.oracle(xs), contributions, payload, net.trace
    )
