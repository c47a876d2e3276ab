from __future__ import annotations

import math

import pytest

from privagg import schemes
from privagg.schemes import Contribution, HashSpec, derive_round_base, transcript
from privagg.schemes.base import as_matrix, check_shapes, matvec, weighted_sum


def test_shapes():
    assert as_matrix(3) == ((3,),)
    assert matvec(((1, 2), (3, 4)), (1, -1)) == (-1, -1)
    assert weighted_sum([((2,),), ((3,),)], [4, -1]) == [5]

    with pytest.raises(ValueError):
        matvec(((1, 2),), (1,))
    with pytest.raises(ValueError):
        check_shapes([((1,),), ((1,), (2,))])
    with pytest.raises(ValueError):
        check_shapes([])


def test_round_base():
    spec = HashSpec.for_modulus(35)
    h = derive_round_base(spec, 3)
    assert h == derive_round_base(spec, 3)
    assert 0 < h < 1225
    assert math.gcd(h, 35) == 1
    assert derive_round_base(spec, 4) != h or derive_round_base(spec, 5) != h

    assert derive_round_base(HashSpec.stubbed(35, 2), 9) == 2
    with pytest.raises(ValueError):
        derive_round_base(spec, -1)


def test_contribution_bytes(toy_key):
    from privagg.crypto import encrypt  # noqa: PLC0415

    c = Contribution(2, 1, "residue", (5, 2**70))
    assert Contribution.from_bytes(c.to_bytes(), 2, 1, "residue") == c

    ct = Contribution(1, 0, "ciphertext", (encrypt(toy_key.public, 3, r=1),))
    assert Contribution.from_bytes(ct.to_bytes(), 1, 0, "ciphertext", 35) == ct
    with pytest.raises(ValueError):
        Contribution.from_bytes(ct.to_bytes(), 1, 0, "ciphertext")


def test_transcript():
    cs = [Contribution(2, 0, "residue", (1,)), Contribution(1, 0, "residue", (255,))]
    lines = transcript(cs).splitlines()
    assert len(lines) == 2
    assert lines[0].startswith("0,1,residue,")
    assert lines[1].startswith("0,2,residue,")


def test_lazy_loader():
    assert schemes.PWSAh.scheme_id == "pwsah"
    assert "PWSAhPacked" in dir(schemes)
    with pytest.raises(AttributeError):
        schemes.PWSAx  # noqa: B018
