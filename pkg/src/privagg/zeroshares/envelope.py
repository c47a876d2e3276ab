"""Authenticated envelopes for pairwise share delivery.

Wire layout: sender (4B) | recipient (4B) | t (8B) | nonce (12B) | body,
where body is the AES-128-GCM encryption of the serialized share followed by
the 16-byte tag. The 16-byte header is bound as associated data.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable
from dataclasses import dataclass, field

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives.ciphers.aead import AESGCM

from ..exceptions import ProtocolError
from ..numeric import RandomSource, decode_bigint_vector, encode_bigint_vector

log = logging.getLogger(__name__)

KEY_SIZE = 16
NONCE_SIZE = 12
TAG_SIZE = 16
HEADER_SIZE = 16


@dataclass(frozen=True)
class ShareEnvelope:
    sender: int
    recipient: int
    t: int
    nonce: bytes
    body: bytes

    @property
    def header(self) -> bytes:
        return (
            self.sender.to_bytes(4, "big")
            + self.recipient.to_bytes(4, "big")
            + self.t.to_bytes(8, "big")
        )

    def to_bytes(self) -> bytes:
        return self.header + self.nonce + self.body

    @classmethod
    def from_bytes(cls, buf: bytes) -> ShareEnvelope:
        if len(buf) < HEADER_SIZE + NONCE_SIZE + TAG_SIZE:
            msg = f"envelope of {len(buf)} bytes is truncated"
            raise ProtocolError(msg)
        return cls(
            int.from_bytes(buf[0:4], "big"),
            int.from_bytes(buf[4:8], "big"),
            int.from_bytes(buf[8:16], "big"),
            buf[16:28],
            buf[28:],
        )

    def __len__(self) -> int:
        return HEADER_SIZE + NONCE_SIZE + len(self.body)


@dataclass
class PairwiseKeyring:
    """AES-128 keys for unordered participant pairs, provisioned offline."""

    keys: dict[tuple[int, int], bytes] = field(default_factory=dict)

    @classmethod
    def provision(cls, ids: Iterable[int], rng: RandomSource) -> PairwiseKeyring:
        ids = sorted(ids)
        return cls(
            {
                (a, b): rng.token_bytes(KEY_SIZE)
                for i, a in enumerate(ids)
                for b in ids[i + 1 :]
            }
        )

    def key(self, a: int, b: int) -> bytes:
        pair = (min(a, b), max(a, b))
        if pair not in self.keys:
            msg = f"no pairwise key for {pair}"
            raise ProtocolError(msg, a)
        return self.keys[pair]


def seal(
    key: bytes,
    sender: int,
    recipient: int,
    t: int,
    share: int | Iterable[int],
    rng: RandomSource,
) -> ShareEnvelope:
    """Encrypt a (vector) share from `sender` to `recipient`."""
    values = [share] if isinstance(share, int) else list(share)
    env = ShareEnvelope(sender, recipient, t, rng.token_bytes(NONCE_SIZE), b"")
    body = AESGCM(key).encrypt(env.nonce, encode_bigint_vector(values), env.header)
    return ShareEnvelope(sender, recipient, t, env.nonce, body)


def open_envelope(key: bytes, env: ShareEnvelope) -> list[int]:
    """Authenticate and decrypt `env`, raising :class:`.ProtocolError` on
    failure."""
    try:
        plain = AESGCM(key).decrypt(env.nonce, env.body, env.header)
    except InvalidTag as e:
        msg = f"envelope from {env.sender} failed authentication"
        raise ProtocolError(msg, env.recipient, env.t) from e
    values, _ = decode_bigint_vector(plain)
    return values
