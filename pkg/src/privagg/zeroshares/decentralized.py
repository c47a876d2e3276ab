"""Dealer-free zero-share generation on a communication graph.

Two protocols are provided. In :func:`one_round_decentralized` every
participant splits zero among its closed neighborhood and each mask is the
sum of what a participant received. In :func:`two_round_relay` every
participant splits zero among *all* participants; shares for non-neighbors
are relayed, still sealed, through the aggregator. The second one costs
two more rounds but raises the collusion threshold to ``M − 1``.

The graph must contain the aggregator as node ``0``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import networkx as nx

from ..exceptions import ProtocolError
from ..numeric import RandomSource, decode_bigint_vector, encode_bigint_vector
from ..simnet import AGGREGATOR, Message, Network, Participant, SimTrace
from .envelope import PairwiseKeyring, ShareEnvelope, open_envelope, seal
from .shares import ShareRange, ShareRows, ZeroShareSet

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class DecentralizedShares:
    """Masks produced by a decentralized protocol run."""

    t: int
    masks: dict[int, tuple[int, ...]]
    share_range: ShareRange
    threshold: int
    rounds: int
    trace: SimTrace = field(repr=False, compare=False)
    repaired: tuple[int, ...] = ()

    def total(self, k: int = 0) -> int:
        return sum(m[k] for m in self.masks.values())

    def rows(self) -> ShareRows:
        """One :class:`.ZeroShareSet` per mask component."""
        agents = sorted(p for p in self.masks if p != AGGREGATOR)
        if agents != list(range(1, len(agents) + 1)):
            msg = f"agents must be numbered 1..M, got {agents}"
            raise ValueError(msg)
        dim = len(self.masks[AGGREGATOR])
        return tuple(
            ZeroShareSet(
                self.t,
                tuple(self.masks[i][k] for i in agents),
                self.masks[AGGREGATOR][k],
                self.share_range,
            )
            for k in range(dim)
        )


def split_zero(
    recipients: list[int],
    own: int,
    share_range: ShareRange,
    dim: int,
    rng: RandomSource,
) -> dict[int, list[int]]:
    """One share for every peer in `recipients` (which includes
    `own`), summing to zero componentwise. The own share closes the sum."""
    out = {
        peer: [share_range.sample(rng) for _ in range(dim)]
        for peer in recipients
        if peer != own
    }
    out[own] = [share_range.close(sum(v[k] for v in out.values())) for k in range(dim)]
    return out


def _accumulate(
    values: list[list[int]], share_range: ShareRange, dim: int
) -> tuple[int, ...]:
    sums = [sum(v[k] for v in values) for k in range(dim)]
    if share_range.is_modular:
        sums = [s % share_range.modulus for s in sums]
    return tuple(sums)


def gcd_repair(
    s_i: int, N: int, own: int, to_aggregator: int
) -> tuple[int, int, int]:
    """Make an agent mask a unit modulo `N`.

    While ``gcd(s_i, N) ≠ 1``, the agent increments its own share and
    decrements the share it sent to the aggregator, which keeps its shares
    summing to zero. The aggregator share is not used for masking and
    absorbs the change.

    Returns
    -------
    ``(s_i, own, to_aggregator)`` after repair, all reduced modulo `N`.

    Examples
    --------
    >>> gcd_repair(14, 35, 3, 20)
    (16, 5, 18)
    """
    while math.gcd(s_i % N, N) != 1:
        s_i += 1
        own += 1
        to_aggregator -= 1
    return s_i % N, own % N, to_aggregator % N


class _ShareParticipant(Participant):
    def __init__(
        self,
        pid: int,
        t: int,
        recipients: list[int],
        neighbors: set[int],
        share_range: ShareRange,
        dim: int,
        keyring: PairwiseKeyring | None,
        rng: RandomSource,
    ) -> None:
        super().__init__(pid)
        self.t = t
        self.recipients = recipients
        self.neighbors = neighbors
        self.share_range = share_range
        self.dim = dim
        self.keyring = keyring
        self.rng = rng
        self.outgoing: dict[int, list[int]] = {}
        self.incoming: dict[int, list[int]] = {}

    def _pack(self, recipient: int, share: list[int]) -> bytes:
        if self.keyring is None:
            return ShareEnvelope(
                self.pid, recipient, self.t, bytes(12), _plain_body(share)
            ).to_bytes()
        key = self.keyring.key(self.pid, recipient)
        return seal(key, self.pid, recipient, self.t, share, self.rng).to_bytes()

    def _unpack(self, payload: bytes) -> tuple[int, list[int]]:
        env = ShareEnvelope.from_bytes(payload)
        if env.recipient != self.pid or env.t != self.t:
            msg = f"misrouted envelope for {env.recipient} at t={env.t}"
            raise ProtocolError(msg, self.pid, self.t)
        if self.keyring is None:
            return env.sender, _open_plain(env.body)
        return env.sender, open_envelope(self.keyring.key(env.sender, self.pid), env)

    def generate(self) -> list[Message]:
        self.outgoing = split_zero(
            self.recipients, self.pid, self.share_range, self.dim, self.rng
        )
        out = []
        for peer in self.recipients:
            if peer == self.pid:
                continue
            payload = self._pack(peer, self.outgoing[peer])
            if peer in self.neighbors:
                out.append(Message(self.pid, peer, "share", payload))
            else:
                out.append(Message(self.pid, AGGREGATOR, "relay", payload))
        return out

    def absorb(self, msgs: list[Message]) -> None:
        for m in msgs:
            if m.kind not in ("share", "forward", "repair"):
                continue
            sender, values = self._unpack(m.payload)
            self.incoming[sender] = values

    def receive(self, msg: Message) -> None:
        super().receive(msg)
        self.absorb([msg])

    def expect_complete(self) -> None:
        missing = [
            p for p in self.recipients if p != self.pid and p not in self.incoming
        ]
        if missing:
            msg = f"missing shares from participant(s) {missing}"
            raise ProtocolError(msg, self.pid, self.t)

    @property
    def mask(self) -> tuple[int, ...]:
        values = [self.outgoing[self.pid], *self.incoming.values()]
        return _accumulate(values, self.share_range, self.dim)


def _plain_body(share: list[int]) -> bytes:
    return encode_bigint_vector(share)


def _open_plain(body: bytes) -> list[int]:
    return decode_bigint_vector(body)[0]


class _OneRoundParticipant(_ShareParticipant):
    def step(self, round_no: int, inbox: list[Message]) -> list[Message]:
        if round_no == 1:
            return self.generate()
        self.absorb(inbox)
        return []


class _RelayParticipant(_ShareParticipant):
    def __init__(self, *args, require_units: bool = False, **kwargs) -> None:
        super().__init__(*args, **kwargs)
        self.require_units = require_units
        self.repaired = False

    def step(self, round_no: int, inbox: list[Message]) -> list[Message]:
        if round_no == 1:
            return self.generate()

        self.absorb(inbox)
        if round_no == 2 and self.pid == AGGREGATOR:
            # forward the sealed batch, ordered by (recipient, sender)
            relayed = sorted(
                (
                    ShareEnvelope.from_bytes(m.payload)
                    for m in inbox
                    if m.kind == "relay"
                ),
                key=lambda e: (e.recipient, e.sender),
            )
            return [
                Message(AGGREGATOR, e.recipient, "forward", e.to_bytes())
                for e in relayed
            ]

        if round_no == 3:
            self.expect_complete()
            if self.pid != AGGREGATOR and self.require_units:
                return self._repair()
        return []

    def _repair(self) -> list[Message]:
        N = self.share_range.modulus
        mask = list(self.mask)
        own = list(self.outgoing[self.pid])
        to_agg = list(self.outgoing[AGGREGATOR])
        changed = False
        for k in range(self.dim):
            if math.gcd(mask[k], N) == 1:
                continue
            mask[k], own[k], to_agg[k] = gcd_repair(mask[k], N, own[k], to_agg[k])
            changed = True

        if not changed:
            return []

        log.debug(f"participant {self.pid} repaired its mask at t={self.t}")
        self.repaired = True
        self.outgoing[self.pid] = own
        self.outgoing[AGGREGATOR] = to_agg
        return [
            Message(self.pid, AGGREGATOR, "repair", self._pack(AGGREGATOR, to_agg))
        ]


def _check_graph(graph: nx.Graph) -> None:
    if AGGREGATOR not in graph:
        msg = "the graph must contain the aggregator as node 0"
        raise ProtocolError(msg)
    if not nx.is_connected(graph):
        msg = "communication graph is disconnected"
        raise ProtocolError(msg)


def one_round_decentralized(
    graph: nx.Graph,
    t: int,
    rng: RandomSource,
    share_range: ShareRange,
    dim: int = 1,
    keyring: PairwiseKeyring | None = None,
) -> DecentralizedShares:
    """Zero shares in one round over the closed neighborhoods of `graph`.

    Every participant sends one share to each neighbor, so the collusion
    threshold is the minimum degree of `graph`.

    Parameters
    ----------
    graph
        connected graph over the participants, aggregator as node ``0``.
    t
        time step the masks are for.
    rng
        source from which each participant spawns its own stream.
    share_range
        range of the individual shares.
    dim
        mask components per participant.
    keyring
        if given, shares travel in sealed envelopes.
    """
    _check_graph(graph)
    parts = [
        _OneRoundParticipant(
            pid,
            t,
            sorted([pid, *graph.neighbors(pid)]),
            set(graph.neighbors(pid)),
            share_range,
            dim,
            keyring,
            rng.spawn(f"one-round/{t}/{pid}"),
        )
        for pid in sorted(graph.nodes)
    ]
    net = Network(parts)
    net.run(1, phase="offline")
    net.flush()
    for p in parts:
        p.expect_complete()

    threshold = min(d for _, d in graph.degree)
    log.debug(f"one-round shares at t={t}, collusion threshold {threshold}")
    return DecentralizedShares(
        t, {p.pid: p.mask for p in parts}, share_range, threshold, 1, net.trace
    )


def two_round_relay(
    graph: nx.Graph,
    t: int,
    keyring: PairwiseKeyring,
    rng: RandomSource,
    share_range: ShareRange,
    dim: int = 1,
    require_units: bool = False,
) -> DecentralizedShares:
    """Zero shares among all participants, relayed through the aggregator.

    Round 1: everyone splits zero among all participants, sending sealed
    shares directly to neighbors and via the aggregator otherwise.
    Round 2: the aggregator forwards the relayed envelopes.
    Round 3: masks are summed; with `require_units` agents repair masks
    that are not units modulo the share modulus and send the corrected
    aggregator share along with the next message.

    Raises
    ------
    ProtocolError
        on a disconnected graph, a missing envelope or a failed
        authentication.
    """
    _check_graph(graph)
    if require_units and not share_range.is_modular:
        msg = "unit masks require a modular share range"
        raise ValueError(msg)

    everyone = sorted(graph.nodes)
    parts = [
        _RelayParticipant(
            pid,
            t,
            everyone,
            set(everyone) - {pid}
            if pid == AGGREGATOR
            else set(graph.neighbors(pid)) | {AGGREGATOR},
            share_range,
            dim,
            keyring,
            rng.spawn(f"two-round/{t}/{pid}"),
            require_units=require_units,
        )
        for pid in everyone
    ]
    net = Network(parts)
    net.run(3, phase="offline")
    net.flush()

    repaired = tuple(p.pid for p in parts if p.repaired)
    M = len(everyone) - 1
    return DecentralizedShares(
        t,
        {p.pid: p.mask for p in parts},
        share_range,
        max(M - 1, 0),
        3,
        net.trace,
        repaired,
    )
