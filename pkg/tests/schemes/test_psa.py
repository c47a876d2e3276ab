from __future__ import annotations

import pytest

from privagg.exceptions import ProtocolError
from privagg.schemes import Contribution
from privagg.schemes.psa import PSA1, PSA2, psa1_modulus
from privagg.zeroshares import ShareRange, ZeroShareSet


def _toy_psa1():
    s = ZeroShareSet(0, (100, 50, 30), 76, ShareRange.mod_q(256))
    W = (((2,),), ((1,),), ((1,),))
    return PSA1(W, {}, 0, 256).with_shares(0, (s,))


def test_psa1_toy():
    psa = _toy_psa1()
    cs = [psa.enc(i, x, 0) for i, x in enumerate((3, 4, 5), 1)]
    assert [c.payload for c in cs] == [(106,), (54,), (35,)]
    assert psa.aggr_dec(cs, 0) == 15
    assert psa.element_bits == 8


def test_psa1_replayed_shares():
    # without randomness, reusing a step's shares repeats the residue
    psa = _toy_psa1()
    assert psa.enc(1, 3, 0) == psa.enc(1, 3, 0)
    assert psa.enc(1, 3, 0).payload != psa.enc(1, 4, 0).payload


def test_psa1_modulus():
    assert psa1_modulus(32, 50, 1, 2048) == 2**2048
    assert psa1_modulus(32, 50, 6, 64) == 2**74


def test_psa1_setup(rng):
    psa = PSA1.setup([2, -1, 3], 8, rng, T=3, kappa=16)
    assert psa.Q == 2**19
    for t in range(3):
        assert psa.run([5, -7, 2], t, rng) == 23
    assert psa.shares_for(0) != psa.shares_for(1)

    with pytest.raises(ProtocolError):
        psa.enc(1, 5, 3)
    with pytest.raises(ProtocolError):
        psa.enc(4, 5, 0)


def test_psa1_matrix(rng):
    W = [[[1, 2], [3, 4]], [[-1, 0], [0, 1]]]
    psa = PSA1.setup(W, 8, rng, kappa=32)
    assert psa.run([[1, 1], [2, 3]], 0, rng) == (1, 10)


def test_psa2(rng):
    psa = PSA2.setup([1, 1, 1], rng, kappa=256, l_i=8)
    assert psa.params is None
    # one share set serves every step
    for t in (0, 5):
        assert psa.run([3, -4, 9], t, rng) == 8


def test_psa2_packed(rng):
    W = [[[1, 2], [3, -4]], [[5, 0], [0, 6]], [[-7, 1], [1, 1]]]
    xs = [[10, -3], [2, 2], [-1, 4]]
    psa = PSA2.setup(W, rng, kappa=256, l_i=8)
    assert psa.params is not None
    assert (psa.params.gamma, psa.params.delta, psa.params.m) == (17, 20, 12)
    assert len(psa.groups) == 1
    assert psa.run(xs, 2, rng) == psa.oracle(xs)

    with pytest.raises(ValueError):
        PSA2.setup(W, rng, kappa=256, l_i=8, packed=False)


def test_psa2_tampered(rng):
    psa = PSA2.setup([1, 1], rng, kappa=256, l_i=8)
    cs = [psa.enc(i, x, 0, rng) for i, x in enumerate((3, 4), 1)]
    forged = Contribution(1, 0, cs[0].kind, (2,))
    with pytest.raises(ProtocolError):
        psa.aggr_dec([forged, cs[1]], 0)

    with pytest.raises(ProtocolError):
        psa.aggr_dec(cs[:1], 0)
    with pytest.raises(ProtocolError):
        psa.aggr_dec([Contribution(1, 0, "residue", (2,)), cs[1]], 0)
