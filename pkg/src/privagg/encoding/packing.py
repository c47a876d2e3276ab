"""Multi-slot packing of non-negative integers into one plaintext."""

from __future__ import annotations

import logging
from collections.abc import Sequence

from ..utils import ceil_div
from .fixed import lift_offset

log = logging.getLogger(__name__)


class SlotOverflowError(ValueError):
    """A value does not fit its slot, or the slots do not fit the plaintext."""


def pack(
    values: Sequence[int], delta: int, capacity_bits: int | None = None
) -> int:
    """Pack values as base-``2^delta`` digits, first value lowest.

    Parameters
    ----------
    values
        each in ``[0, 2^delta)``.
    delta
        slot width in bits.
    capacity_bits
        if given, require ``len(values) · delta < capacity_bits``.

    Examples
    --------
    >>> pack([1, 2, 3], 8)
    197121
    """
    if capacity_bits is not None and len(values) * delta >= capacity_bits:
        msg = f"{len(values)} slots of {delta} bits exceed {capacity_bits} bits"
        raise SlotOverflowError(msg)

    packed = 0
    for j, v in enumerate(values):
        if not 0 <= v < 1 << delta:
            msg = f"slot {j} value {v} outside [0, 2^{delta})"
            raise SlotOverflowError(msg)
        packed |= v << (j * delta)
    return packed


def unpack(packed: int, delta: int, m: int) -> list[int]:
    """Extract `m` slots: slot ``j = (P >> jδ) mod 2^δ``."""
    mask = (1 << delta) - 1
    return [(packed >> (j * delta)) & mask for j in range(m)]


def split_groups(n_a: int, m: int) -> list[range]:
    """Split `n_a` rows into ``⌈n_a/m⌉`` consecutive groups of at most `m`.

    Examples
    --------
    >>> [len(g) for g in split_groups(12, 10)]
    [10, 2]
    """
    if m < 1:
        msg = f"slot capacity must be positive, got {m}"
        raise ValueError(msg)
    return [range(g * m, min((g + 1) * m, n_a)) for g in range(ceil_div(n_a, m))]


def column_pack_matrix(W: Sequence[Sequence[int]], gamma: int, delta: int) -> list[int]:
    """Column-pack a signed integer matrix.

    Column `j` becomes ``Σ_k lift_offset(W[k][j]) · 2^(kδ)``, so a
    plaintext-scalar product with ``x_j`` followed by a sum over columns
    computes every row of ``W x`` in its own slot.

    Examples
    --------
    >>> column_pack_matrix([[1, -1], [2, 0]], 6, 17)[0] == 65 + 66 * 2**17
    True
    """
    n_rows = len(W)
    n_cols = len(W[0]) if n_rows else 0
    return [
        pack([lift_offset(int(W[k][j]), gamma) for k in range(n_rows)], delta)
        for j in range(n_cols)
    ]


def column_pack_groups(
    W: Sequence[Sequence[int]], gamma: int, delta: int, m: int
) -> list[list[int]]:
    """:func:`column_pack_matrix` over row groups of at most `m` rows."""
    return [
        column_pack_matrix([W[k] for k in rows], gamma, delta)
        for rows in split_groups(len(W), m)
    ]
