from __future__ import annotations

from fractions import Fraction

import pytest

from privagg.encoding import (
    center_lift,
    decode_fixed,
    drop_offset,
    encode_fixed,
    lift_mod,
    lift_offset,
    quantize,
    round_half_away,
)


def test_encode_fixed():
    assert encode_fixed(1.5, 2, 2).raw == 6
    assert encode_fixed(-1.5, 2, 2).raw == -6
    assert encode_fixed("0.75", 2, 2).to_fraction() == Fraction(3, 4)

    # ties away from zero
    assert encode_fixed(0.125, 2, 2).raw == 1
    assert encode_fixed(-0.125, 2, 2).raw == -1

    with pytest.raises(OverflowError):
        encode_fixed(4, 2, 2)
    assert encode_fixed(-2, 2, 2).raw == -8


def test_rounding():
    assert quantize(2.5, 0) == 3
    assert quantize(-2.5, 0) == -3
    assert quantize(Fraction(1, 3), 4) == 5
    assert round_half_away(Fraction(-1, 2)) == -1
    assert round_half_away(Fraction(7, 5)) == 1


def test_decode_fixed():
    assert decode_fixed(6, 2) == Fraction(3, 2)
    assert decode_fixed(9, 2, scale_power=2) == Fraction(9, 16)


def test_offset_lift():
    assert lift_offset(-6, 4) == 10
    assert lift_offset(15, 4) == 31
    with pytest.raises(ValueError):
        lift_offset(16, 4)

    assert drop_offset(54, 4, count=3) == 6
    assert drop_offset(20, 4, center=True) == 4
    assert drop_offset(10, 4, center=True) == -6


def test_center_lift():
    assert center_lift(29, 35) == -6
    assert center_lift(17, 35) == 17
    assert center_lift(8, 16) == -8
    assert center_lift(-1, 35) == -1

    assert lift_mod(-6, 35) == 29
    with pytest.raises(ValueError):
        lift_mod(18, 35)
