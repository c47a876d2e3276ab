"""Types shared by all aggregation schemes."""

from __future__ import annotations

import dataclasses
import hashlib
import logging
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, ClassVar

from .. import settings
from ..crypto import Ciphertext, PublicKey, deserialize, serialize
from ..encoding import decode_fixed
from ..exceptions import ProtocolError
from ..numeric import RandomSource, decode_bigint, encode_bigint
from ..utils import ceil_div

log = logging.getLogger(__name__)

Matrix = tuple[tuple[int, ...], ...]

ALL_STEPS = -1
"""Share key for schemes with one initial set of shares."""


def as_matrix(w: int | Sequence[Sequence[int]]) -> Matrix:
    """A scalar weight becomes a 1×1 matrix."""
    if isinstance(w, int):
        return ((w,),)
    return tuple(tuple(int(v) for v in row) for row in w)


def as_vector(x: int | Sequence[int]) -> tuple[int, ...]:
    if isinstance(x, int):
        return (x,)
    return tuple(int(v) for v in x)


def matvec(W: Matrix, x: Sequence[int]) -> tuple[int, ...]:
    if len(W[0]) != len(x):
        msg = f"{len(W)}×{len(W[0])} weights cannot multiply a {len(x)}-vector"
        raise ValueError(msg)
    return tuple(sum(w * v for w, v in zip(row, x, strict=True)) for row in W)


def weighted_sum(
    weights: Sequence[Matrix], xs: Sequence[int | Sequence[int]]
) -> list[int]:
    """``Σ_i W_i x_i`` over the integers."""
    rows = [0] * len(weights[0])
    for W, x in zip(weights, xs, strict=True):
        for k, v in enumerate(matvec(W, as_vector(x))):
            rows[k] += v
    return rows


def check_shapes(weights: Sequence[Matrix]) -> None:
    """All agents share one row count; every matrix is rectangular."""
    if not weights:
        msg = "need at least one agent"
        raise ValueError(msg)
    n_a = len(weights[0])
    for i, W in enumerate(weights, 1):
        if len(W) != n_a or any(len(row) != len(W[0]) for row in W):
            msg = f"weights of agent {i} are not an {n_a}-row matrix"
            raise ValueError(msg)


def check_signed_bits(values: Sequence[int], l: int, what: str) -> None:  # noqa: E741
    half = 1 << (l - 1)
    for v in values:
        if not -half <= v < half:
            msg = f"{what} {v} does not fit in {l} signed bits"
            raise ValueError(msg)


@dataclass(frozen=True)
class HashSpec:
    """Hash onto ``ℤ/N²ℤ``.

    With `unit_only`, non-units are skipped by re-expanding with a retry
    counter; schemes that raise the round base to negative powers need it.
    `stub` replaces the hash by a constant, for golden transcripts.
    """

    domain_tag: bytes
    N2: int
    unit_only: bool = False
    stub: int | None = None

    @classmethod
    def for_modulus(cls, N: int, unit_only: bool = True) -> HashSpec:
        return cls(settings.DEFAULT_SETTINGS["hash_domain_tag"], N * N, unit_only)

    @classmethod
    def stubbed(cls, N: int, value: int) -> HashSpec:
        return cls(b"stub", N * N, stub=value)


def _expand(tag: bytes, t: int, retry: int, nbytes: int) -> int:
    prefix = tag + t.to_bytes(8, "big") + retry.to_bytes(4, "big")
    out = b""
    ctr = 0
    while len(out) < nbytes:
        out += hashlib.sha256(prefix + ctr.to_bytes(4, "big")).digest()
        ctr += 1
    return int.from_bytes(out[:nbytes], "big")


def derive_round_base(spec: HashSpec, t: int) -> int:
    """``H(t)`` in ``[0, N²)``.

    SHA-256 in counter mode over ``tag ‖ t (8B) ‖ retry (4B) ‖ counter (4B)``
    is expanded to ``2·⌈log₂N²⌉`` bits and reduced modulo ``N²``.
    """
    if t < 0:
        msg = f"time step must be non-negative, got {t}"
        raise ValueError(msg)
    if spec.stub is not None:
        return spec.stub % spec.N2

    nbytes = (2 * spec.N2.bit_length() + 7) // 8
    for retry in range(1 << 16):
        h = _expand(spec.domain_tag, t, retry, nbytes) % spec.N2
        if not spec.unit_only or math.gcd(h, spec.N2) == 1:
            return h

    msg = f"no unit round base found for t={t}"
    raise ArithmeticError(msg)


@dataclass(frozen=True)
class Contribution:
    """What agent `agent` sends to the aggregator at step `t`."""

    agent: int
    t: int
    kind: str
    payload: tuple[int | Ciphertext, ...]

    def to_bytes(self) -> bytes:
        return b"".join(
            serialize(p) if isinstance(p, Ciphertext) else encode_bigint(p)
            for p in self.payload
        )

    @classmethod
    def from_bytes(
        cls, buf: bytes, agent: int, t: int, kind: str, N: int | None = None
    ) -> Contribution:
        """Inverse of :meth:`to_bytes`; ciphertexts need their modulus `N`."""
        payload: list[int | Ciphertext] = []
        offset = 0
        while offset < len(buf):
            if kind == "ciphertext":
                if N is None:
                    msg = "decoding ciphertexts requires the modulus"
                    raise ValueError(msg)
                item, offset = deserialize(buf, PublicKey(N), offset)
            else:
                item, offset = decode_bigint(buf, offset)
            payload.append(item)
        return cls(agent, t, kind, tuple(payload))

    @property
    def count(self) -> int:
        return len(self.payload)

    def transcript_line(self) -> str:
        return f"{self.t},{self.agent},{self.kind},{self.to_bytes().hex()}"


def transcript(contributions: Sequence[Contribution]) -> str:
    """Line-oriented ``t,sender,payload-kind,payload-hex`` log."""
    ordered = sorted(contributions, key=lambda c: (c.t, c.agent))
    return "".join(c.transcript_line() + "\n" for c in ordered)


@dataclass(frozen=True)
class AggregationScheme:
    """Common plumbing of the Setup/InitW/Enc/AggrDec families.

    Participant ``0`` is the aggregator and agents are ``1..M``. Inputs
    and weights are raw fixed-point integers, aggregates are raw integers
    at scale ``2^(2 l_f)``.
    """

    scheme_id: ClassVar[str] = ""
    contribution_kind: ClassVar[str] = ""

    weights: tuple[Matrix, ...]
    shares: Mapping[int, Any]
    l_f: int

    @property
    def M(self) -> int:
        return len(self.weights)

    @property
    def n_a(self) -> int:
        return len(self.weights[0])

    def n_i(self, i: int) -> int:
        return len(self.weights[i - 1][0])

    @property
    def is_scalar(self) -> bool:
        return all(len(W) == 1 and len(W[0]) == 1 for W in self.weights)

    @property
    def element_bits(self) -> int:
        """Bits of one payload element, as counted for communication."""
        raise NotImplementedError

    def payload_bytes(self, contribution: Contribution) -> int:
        return contribution.count * ceil_div(self.element_bits, 8)

    def payload_count(self, i: int) -> int:
        """Number of payload elements agent `i` sends per step."""
        raise NotImplementedError

    def shares_for(self, t: int) -> Any:
        """Shares of step `t`, falling back to the initial set."""
        for key in (t, ALL_STEPS):
            if key in self.shares:
                return self.shares[key]
        msg = "no shares provisioned"
        raise ProtocolError(msg, t=t)

    def with_shares(self, t: int, shares: Any) -> AggregationScheme:
        """A copy using `shares` at step `t`."""
        return dataclasses.replace(self, shares={**self.shares, t: shares})

    def _agent_check(self, i: int) -> None:
        if not 1 <= i <= self.M:
            msg = f"no agent {i} in a scheme with M={self.M}"
            raise ProtocolError(msg, i)

    def _collect(
        self, contributions: Sequence[Contribution] | Mapping[int, Contribution], t: int
    ) -> dict[int, Contribution]:
        if isinstance(contributions, Mapping):
            contributions = list(contributions.values())
        by_agent = {c.agent: c for c in contributions if c.t == t}
        missing = [i for i in range(1, self.M + 1) if i not in by_agent]
        if missing:
            msg = f"missing contribution(s) from agent(s) {missing}"
            raise ProtocolError(msg, 0, t)
        for c in by_agent.values():
            if c.kind != self.contribution_kind:
                msg = f"expected a {self.contribution_kind} payload, got {c.kind}"
                raise ProtocolError(msg, c.agent, t)
        return by_agent

    def _result(self, rows: Sequence[int]) -> int | tuple[int, ...]:
        return rows[0] if self.is_scalar else tuple(rows)

    def oracle(self, xs: Sequence[int | Sequence[int]]) -> int | tuple[int, ...]:
        """Plaintext ``Σ_i W_i x_i``."""
        if len(xs) != self.M:
            msg = f"expected {self.M} inputs, got {len(xs)}"
            raise ValueError(msg)
        return self._result(weighted_sum(self.weights, xs))

    def decode(self, result: int | Sequence[int]) -> Fraction | tuple[Fraction, ...]:
        """Descale an aggregate by ``2^(2 l_f)``."""
        if isinstance(result, int):
            return decode_fixed(result, self.l_f, 2)
        return tuple(decode_fixed(r, self.l_f, 2) for r in result)

    def with_weights(
        self, weights: Sequence, rng: RandomSource | None = None
    ) -> AggregationScheme:
        raise NotImplementedError

    def enc(
        self, i: int, x: int | Sequence[int], t: int, rng: RandomSource | None = None
    ) -> Contribution:
        raise NotImplementedError

    def aggr_dec(
        self,
        contributions: Sequence[Contribution] | Mapping[int, Contribution],
        t: int,
    ) -> int | tuple[int, ...]:
        raise NotImplementedError

    def run(
        self,
        xs: Sequence[int | Sequence[int]],
        t: int,
        rng: RandomSource | None = None,
    ) -> int | tuple[int, ...]:
        """Encrypt every input and aggregate, without the simulator."""
        if rng is None:
            rng = RandomSource.cryptographic()
        contributions = [
            self.enc(i, x, t, rng.spawn(f"enc/{t}/{i}")) for i, x in enumerate(xs, 1)
        ]
        return self.aggr_dec(contributions, t)
