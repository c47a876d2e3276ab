from __future__ import annotations

import dataclasses

import pytest

from privagg.exceptions import ProtocolError
from privagg.zeroshares import PairwiseKeyring, ShareEnvelope, open_envelope, seal


def test_seal_open(rng):
    ring = PairwiseKeyring.provision([0, 1, 2], rng)
    assert sorted(ring.keys) == [(0, 1), (0, 2), (1, 2)]
    assert ring.key(2, 1) == ring.key(1, 2)

    env = seal(ring.key(1, 2), 1, 2, 7, [3, -4, 2**300], rng)
    assert (env.sender, env.recipient, env.t) == (1, 2, 7)

    back = ShareEnvelope.from_bytes(env.to_bytes())
    assert back == env
    assert len(back) == len(env.to_bytes())
    assert open_envelope(ring.key(2, 1), back) == [3, -4, 2**300]

    assert open_envelope(ring.key(1, 2), seal(ring.key(1, 2), 1, 2, 0, 9, rng)) == [9]


def test_tampering(rng):
    ring = PairwiseKeyring.provision([0, 1, 2], rng)
    env = seal(ring.key(0, 1), 0, 1, 3, 42, rng)

    with pytest.raises(ProtocolError):
        open_envelope(ring.key(0, 2), env)

    # the header is bound as associated data
    with pytest.raises(ProtocolError):
        open_envelope(ring.key(0, 1), dataclasses.replace(env, t=4))

    flipped = bytes([env.body[0] ^ 1]) + env.body[1:]
    with pytest.raises(ProtocolError):
        open_envelope(ring.key(0, 1), dataclasses.replace(env, body=flipped))

    with pytest.raises(ProtocolError):
        ShareEnvelope.from_bytes(env.to_bytes()[:40])


def test_missing_key(rng):
    ring = PairwiseKeyring.provision([1, 2], rng)
    with pytest.raises(ProtocolError):
        ring.key(0, 1)
