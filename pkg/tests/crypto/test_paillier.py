from __future__ import annotations

import pytest

from privagg.crypto import (
    Ciphertext,
    DecryptionError,
    ModulusMismatchError,
    OpCounter,
    PaillierKeyPair,
    PublicKey,
    counting,
    decrypt,
    deserialize,
    encrypt,
    encrypt_add,
    gamma_dlog,
    hom_add,
    hom_scale,
    hom_sum,
    payload_size,
    rerandomize,
    serialize,
    tally,
    wire_size,
)
from privagg.numeric import RandomSource


def test_toy_key(toy_key):
    assert toy_key.N == 35
    assert toy_key.phi == 24
    assert toy_key.phi_inv == 19
    assert toy_key.modulus_squared == 1225
    assert toy_key.public.g == 36
    assert toy_key.public.kappa == 6


def test_encrypt_golden(toy_key):
    pk = toy_key.public
    assert encrypt(pk, 2, r=1).value == 71
    assert encrypt(pk, 0, r=1).value == 1
    assert pow(71, 24, 1225) == 456
    assert gamma_dlog(456, 35) == 13
    assert decrypt(toy_key, Ciphertext(71, 35)) == 2


def test_roundtrip_toy(toy_key):
    rng = RandomSource.deterministic("roundtrip")
    for m in range(35):
        assert decrypt(toy_key, encrypt(toy_key.public, m, rng=rng)) == m


def test_plaintext_range(toy_key):
    with pytest.raises(ValueError):
        encrypt(toy_key.public, 35, r=1)
    with pytest.raises(ValueError):
        encrypt(toy_key.public, -1, r=1)


def test_gamma_dlog():
    assert gamma_dlog(36, 35) == 1
    with pytest.raises(ValueError):
        gamma_dlog(2, 35)


def test_homomorphisms(toy_key):
    rng = RandomSource.deterministic("hom")
    pk = toy_key.public
    c2 = encrypt(pk, 2, rng=rng)
    c3 = encrypt(pk, 3, rng=rng)
    assert decrypt(toy_key, hom_add(c2, c3)) == 5
    assert decrypt(toy_key, hom_scale(c3, 4)) == 12
    assert decrypt(toy_key, hom_scale(c3, -1)) == 32
    assert decrypt(toy_key, hom_sum([c2, c3, c3])) == 8
    assert decrypt(toy_key, encrypt_add(pk, c2, 10, rng=rng)) == 12

    with pytest.raises(ValueError):
        hom_sum([])


def test_rerandomize(key256):
    rng = RandomSource.deterministic("rerand")
    c = encrypt(key256.public, 42, rng=rng)
    d = rerandomize(key256.public, c, rng)
    assert d != c
    assert decrypt(key256, d) == 42


def test_malformed_ciphertext(toy_key):
    with pytest.raises(DecryptionError):
        decrypt(toy_key, Ciphertext(5, 35))
    with pytest.raises(ValueError):
        Ciphertext(0, 35)
    with pytest.raises(ValueError):
        Ciphertext(1225, 35)


def test_modulus_mismatch(toy_key):
    other = PaillierKeyPair.from_primes(7, 11)
    c = encrypt(toy_key.public, 1, r=1)
    d = encrypt(other.public, 1, r=1)
    with pytest.raises(ModulusMismatchError):
        hom_add(c, d)
    with pytest.raises(ModulusMismatchError):
        decrypt(other, c)
    with pytest.raises(ModulusMismatchError):
        deserialize(serialize(c), other.public)


def test_serialize(key256):
    rng = RandomSource.deterministic("serial")
    c = encrypt(key256.public, 7, rng=rng)
    buf = serialize(c) + serialize(hom_scale(c, 2))
    first, end = deserialize(buf, key256.public)
    second, end2 = deserialize(buf, key256.public, end)
    assert first == c
    assert decrypt(key256, second) == 14
    assert end2 == len(buf)
    assert wire_size(c) == end


def test_payload_size():
    assert payload_size(2048) == 256
    assert payload_size(2048, 6) == 1536
    assert payload_size(6) == 1


def test_counting(toy_key):
    pk = toy_key.public
    with counting() as ops:
        c = encrypt(pk, 3, r=1)
        c = hom_scale(c, 2)
        c = hom_add(c, c)
        c = encrypt_add(pk, c, 1, r=1)
        decrypt(toy_key, c)
    assert ops == OpCounter(exps=1, mults=1, encs=2, decs=1)

    # nothing is tallied outside a counting block
    encrypt(pk, 3, r=1)
    assert ops.encs == 2


def test_nested_counting(toy_key):
    outer = OpCounter()
    with counting(outer):
        hom_scale(encrypt(toy_key.public, 1, r=1), 3)
        with counting() as inner:
            hom_scale(encrypt(toy_key.public, 1, r=1), 3)
    assert inner.exps == 1
    assert outer.exps == 1

    total = OpCounter()
    total += outer
    total += inner
    assert total.asdict() == {"exps": 2, "mults": 0, "encs": 2, "decs": 0}


def test_tally_unknown_kind():
    with pytest.raises(ValueError):
        tally("divs")


def test_public_key_fingerprint(toy_key):
    assert toy_key.public.fingerprint == PublicKey(35).fingerprint
    assert len(toy_key.public.fingerprint) == 8
    assert PublicKey(35).fingerprint != PublicKey(77).fingerprint


def test_homomorphisms_exhaustive(toy_key):
    rng = RandomSource.deterministic("hom-all")
    pk = toy_key.public
    cs = [encrypt(pk, m, rng=rng) for m in range(35)]
    for m1, c1 in enumerate(cs):
        for m2, c2 in enumerate(cs):
            assert decrypt(toy_key, hom_add(c1, c2)) == (m1 + m2) % 35
            assert decrypt(toy_key, hom_scale(c1, m2)) == m1 * m2 % 35
            assert decrypt(toy_key, hom_scale(c1, -m2)) == -m1 * m2 % 35


@pytest.mark.slow
def test_roundtrip_full_size():
    rng = RandomSource.deterministic("full-size")
    keypair = PaillierKeyPair.generate(2048, rng)
    assert keypair.N.bit_length() == 2048
    pk = keypair.public
    for m in (0, 1, keypair.N - 1, rng.randbelow(keypair.N)):
        c = encrypt(pk, m, rng=rng)
        assert decrypt(keypair, c) == m
    c = hom_add(encrypt(pk, 5, rng=rng), encrypt(pk, keypair.N - 7, rng=rng))
    assert decrypt(keypair, c) == keypair.N - 2
