"""Consistency harness for the aggregator-obliviousness game.

An adversary script names the compromised parties, answers encryption
queries at other time steps and submits a challenge. Both branches of the
challenge are encrypted; the report says whether the ciphertexts are well
formed and, when the aggregator is compromised, whether both branches
decrypt to the same aggregate. This checks protocol consistency only, not
indistinguishability.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field

from ..crypto import Ciphertext
from ..numeric import RandomSource
from ..simnet import AGGREGATOR
from .base import (
    AggregationScheme,
    Contribution,
    Matrix,
    as_matrix,
    transcript,
    weighted_sum,
)

log = logging.getLogger(__name__)


class ChallengeRejectedError(ValueError):
    """The challenge would let the adversary win trivially."""


@dataclass(frozen=True)
class Challenge:
    """Two input vectors and, optionally, two weight vectors.

    Without weights, both branches use the scheme's own weights.
    """

    x0: tuple
    x1: tuple
    w0: tuple | None = None
    w1: tuple | None = None


@dataclass(frozen=True)
class AdversaryScript:
    compromised: frozenset[int]
    challenge: Challenge
    t: int = 0
    queries: tuple[tuple[int, object, int], ...] = ()
    """Encryption queries ``(agent, x, t)``, at steps other than `t`."""


@dataclass(frozen=True)
class GameReport:
    accepted: bool
    well_formed: tuple[bool, bool]
    outputs: tuple | None
    queries_answered: int
    transcripts: tuple[str, str] = field(repr=False)

    @property
    def consistent(self) -> bool:
        """Both branches decrypt alike, or the aggregator saw neither."""
        return self.outputs is None or self.outputs[0] == self.outputs[1]


def _branch(
    scheme: AggregationScheme, w: tuple | None, rng: RandomSource
) -> AggregationScheme:
    return scheme if w is None else scheme.with_weights(w, rng)


def _matrices(w: tuple | None, scheme: AggregationScheme) -> tuple[Matrix, ...]:
    if w is None:
        return scheme.weights
    return tuple(as_matrix(wi) for wi in w)


def check_challenge(scheme: AggregationScheme, script: AdversaryScript) -> None:
    """Reject challenges that reveal the bit without breaking the scheme.

    Raises
    ------
    ChallengeRejectedError
        if the vectors have the wrong length, a compromised agent's values
        differ across branches, or the aggregator is compromised and the
        weighted sums differ.
    """
    ch = script.challenge
    if len(ch.x0) != scheme.M or len(ch.x1) != scheme.M:
        msg = f"challenge inputs must have one entry per agent (M={scheme.M})"
        raise ChallengeRejectedError(msg)

    w0 = _matrices(ch.w0, scheme)
    w1 = _matrices(ch.w1, scheme)
    for i in sorted(script.compromised - {AGGREGATOR}):
        if ch.x0[i - 1] != ch.x1[i - 1] or w0[i - 1] != w1[i - 1]:
            msg = f"compromised agent {i} has different values in the two branches"
            raise ChallengeRejectedError(msg)

    if AGGREGATOR in script.compromised:
        s0 = weighted_sum(w0, ch.x0)
        s1 = weighted_sum(w1, ch.x1)
        if s0 != s1:
            msg = f"unbalanced challenge: weighted sums {s0} and {s1} differ"
            raise ChallengeRejectedError(msg)


def well_formed(scheme: AggregationScheme, c: Contribution) -> bool:
    """Payload count and element ranges match what the scheme sends."""
    if c.count != scheme.payload_count(c.agent) or c.kind != scheme.contribution_kind:
        return False
    if c.kind == "residue":
        return all(isinstance(v, int) and 0 <= v < scheme.Q for v in c.payload)
    if c.kind == "group-element":
        N = scheme.N
        return all(
            isinstance(v, int) and 0 < v < N * N and math.gcd(v, N) == 1
            for v in c.payload
        )
    return all(isinstance(v, Ciphertext) and v.N == scheme.N for v in c.payload)


def play(
    scheme: AggregationScheme, script: AdversaryScript, rng: RandomSource | None = None
) -> GameReport:
    """Run both challenge branches of `script` against `scheme`.

    Shares must be provisioned for the challenge step and every query step.
    """
    if rng is None:
        rng = RandomSource.cryptographic()
    check_challenge(scheme, script)

    answered = 0
    for i, x, t in script.queries:
        if t == script.t:
            msg = f"encryption query at the challenge step t={t}"
            raise ChallengeRejectedError(msg)
        scheme.enc(i, x, t, rng.spawn(f"query/{answered}"))
        answered += 1

    ch = script.challenge
    formed = []
    outputs = []
    transcripts = []
    for b, (x, w) in enumerate(((ch.x0, ch.w0), (ch.x1, ch.w1))):
        inst = _branch(scheme, w, rng.spawn(f"weights/{b}"))
        contributions = [
            inst.enc(i, xi, script.t, rng.spawn(f"branch/{b}/{i}"))
            for i, xi in enumerate(x, 1)
        ]
        formed.append(all(well_formed(inst, c) for c in contributions))
        transcripts.append(transcript(contributions))
        if AGGREGATOR in script.compromised:
            outputs.append(inst.aggr_dec(contributions, script.t))

    log.debug(f"game on {scheme.scheme_id}: well formed {formed}, outputs {outputs}")
    return GameReport(
        True,
        (formed[0], formed[1]),
        tuple(outputs) if outputs else None,
        answered,
        (transcripts[0], transcripts[1]),
    )
