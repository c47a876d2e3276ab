r"""Exact statistical distances of additive masking at toy scale.

The distributions are enumerated exhaustively with Numba kernels, and the
distances are returned as exact :class:`~fractions.Fraction`\ s.
"""

from __future__ import annotations

import logging
from fractions import Fraction

import numba
import numpy as np
from numpy.typing import NDArray

from ..utils import clog2
from ..utils import numba_defaults_kwargs as nb_kwargs

log = logging.getLogger(__name__)


@numba.jit(**nb_kwargs(nopython=True))
def _masked_histogram(
    m: int, lo: int, hi: int, modulus: int, hist: NDArray[np.int64]
) -> None:
    """Counts of ``m + s`` (reduced mod `modulus` if positive) for
    ``s ∈ [lo, hi)``."""
    hist[:] = 0
    for s in range(lo, hi):
        v = m + s
        if modulus > 0:
            v %= modulus
        hist[v] += 1


@numba.jit(**nb_kwargs(nopython=True))
def _l1(a: NDArray[np.int64], b: NDArray[np.int64]) -> int:
    acc = 0
    for i in range(a.shape[0]):
        acc += abs(a[i] - b[i])
    return acc


def statistical_masking_distance(msg_bits: int, noise_bits: int) -> Fraction:
    """Largest distance between ``m + s`` and ``m' + s`` for messages in
    ``[0, 2^msg_bits)`` and ``s`` uniform in ``(0, 2^noise_bits)``.

    Examples
    --------
    >>> statistical_masking_distance(3, 7)
    Fraction(7, 127)
    """
    n_msg = 1 << msg_bits
    hi = 1 << noise_bits
    count = hi - 1
    size = n_msg + hi
    ref = np.zeros(size, dtype=np.int64)
    cur = np.zeros(size, dtype=np.int64)

    _masked_histogram(0, 1, hi, 0, ref)
    worst = 0
    # the distance grows with |m − m'|, so comparing with m = 0 suffices
    for m in range(1, n_msg):
        _masked_histogram(m, 1, hi, 0, cur)
        worst = max(worst, _l1(ref, cur))

    return Fraction(worst, 2 * count)


def modular_masking_distance(Q: int, n_msg: int | None = None) -> Fraction:
    """Largest distance between ``(m + s) mod Q`` and uniform over ``ℤ/Qℤ``,
    for ``s`` uniform in ``[0, Q)`` and messages in ``[0, n_msg)``."""
    if n_msg is None:
        n_msg = Q
    uniform = np.ones(Q, dtype=np.int64)
    cur = np.zeros(Q, dtype=np.int64)
    worst = 0
    for m in range(n_msg):
        _masked_histogram(m, 0, Q, Q, cur)
        worst = max(worst, _l1(uniform, cur))
    return Fraction(worst, 2 * Q)


def packed_leakage_distance(l: int, lam: int, n_i: int = 1) -> Fraction:  # noqa: E741
    """Distance for the term ``Σ(W̄ + x̄) + z`` revealed above the packed
    result, with noise ``z`` in ``(0, 2^(l+1+λ+⌈log₂n_i⌉))``.

    Examples
    --------
    >>> packed_leakage_distance(3, 4)
    Fraction(1, 17)
    """
    spread = l + 1 + clog2(n_i)
    return statistical_masking_distance(spread, spread + lam)


def slot_pad_distance(gamma: int) -> Fraction:
    """Distance from uniform of a packed slot masked modulo ``2^gamma``."""
    return modular_masking_distance(1 << gamma)
