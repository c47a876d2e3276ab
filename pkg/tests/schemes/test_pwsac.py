from __future__ import annotations

import pytest

from privagg.exceptions import ProtocolError
from privagg.schemes.pwsac import PWSAc


def test_scalar(rng):
    inst = PWSAc.setup([2, -3, 5], rng, kappa=256)
    assert inst.is_scalar
    assert inst.run([4, 1, -2], 0, rng) == -5
    assert inst.run([4, 1, -2], 7, rng) == -5


def test_matrix(rng):
    W = [[[1, 2], [0, 1]], [[3, 0], [1, 1]]]
    inst = PWSAc.setup(W, rng, kappa=256)
    xs = [[1, 2], [3, -1]]
    assert inst.payload_count(1) == 2
    assert inst.run(xs, 0, rng) == (14, 4)

    other = inst.with_weights([[[2, 0], [1, -1]], [[0, 1], [4, 2]]])
    assert other.shares_for(0).agent_shares == inst.shares_for(0).agent_shares
    assert other.run(xs, 0, rng) == (1, 9)


def test_helper_key(rng, key512):
    inst = PWSAc.setup([3, -2], rng, kappa=128, helper=key512, l=8)
    assert inst.run([5, 7], 0, rng) == 1


def test_input_shape(rng):
    inst = PWSAc.setup([2, 3], rng, kappa=128)
    with pytest.raises(ProtocolError):
        inst.enc(1, [1, 2], 0)
