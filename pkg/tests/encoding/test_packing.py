from __future__ import annotations

import pytest

from privagg.encoding import (
    SlotOverflowError,
    column_pack_groups,
    column_pack_matrix,
    drop_offset,
    pack,
    split_groups,
    unpack,
)


def test_pack_unpack():
    assert pack([1, 2, 3], 8) == 197121
    assert unpack(197121, 8, 3) == [1, 2, 3]
    assert unpack(197121, 8, 5) == [1, 2, 3, 0, 0]
    assert pack([], 8) == 0


def test_pack_overflow():
    with pytest.raises(SlotOverflowError):
        pack([256], 8)
    with pytest.raises(SlotOverflowError):
        pack([-1], 8)
    with pytest.raises(SlotOverflowError):
        pack([1, 2], 8, capacity_bits=16)
    assert pack([1, 2], 8, capacity_bits=17) == 513


def test_split_groups():
    assert [len(g) for g in split_groups(12, 10)] == [10, 2]
    assert split_groups(3, 3) == [range(3)]
    assert split_groups(0, 3) == []
    with pytest.raises(ValueError):
        split_groups(3, 0)


def test_column_pack_matrix():
    W = [[1, -1], [2, 0]]
    cols = column_pack_matrix(W, 6, 17)
    assert cols[0] == 65 + 66 * 2**17
    assert cols[1] == 63 + 64 * 2**17

    # a plaintext dot product with x computes W x slot-wise, offset by 2^6 Σx
    x = [3, 5]
    slots = unpack(sum(c * xj for c, xj in zip(cols, x, strict=True)), 17, 2)
    assert slots == [510, 518]
    assert [drop_offset(s, 6, count=sum(x)) for s in slots] == [-2, 6]


def test_column_pack_groups():
    W = [[1], [2], [3]]
    groups = column_pack_groups(W, 4, 8, 2)
    assert len(groups) == 2
    assert groups[0] == [pack([17, 18], 8)]
    assert groups[1] == [19]
