"""Trusted-dealer generation of zero shares."""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence

from ..crypto import Ciphertext, PaillierKeyPair, decrypt, hom_scale, hom_sum
from ..encoding import center_lift
from ..numeric import RandomSource, sample_unit
from .shares import (
    ShareRange,
    ShareRows,
    WeightedShareMatrixSet,
    WeightedShareSet,
    ZeroShareSet,
)

log = logging.getLogger(__name__)


class DealerWrapError(ArithmeticError):
    """The helper modulus is too small to carry the aggregator share."""


def deal(M: int, share_range: ShareRange, t: int, rng: RandomSource) -> ZeroShareSet:
    agent = tuple(share_range.sample(rng) for _ in range(M))
    return ZeroShareSet(t, agent, share_range.close(sum(agent)), share_range)


def dealer_shares(
    M: int, share_range: ShareRange, t_range: Iterable[int], rng: RandomSource
) -> list[ZeroShareSet]:
    """A fresh, independent :class:`.ZeroShareSet` for every ``t``.

    Parameters
    ----------
    M
        number of agents, at least 1 (2 for any privacy).
    share_range
        where agent shares live.
    t_range
        time steps to provision.
    rng
        the dealer's random source.
    """
    if M < 1:
        msg = f"need at least one agent, got M={M}"
        raise ValueError(msg)
    if M == 1:
        log.debug("dealing shares for a single agent, the aggregator learns its mask")
    return [deal(M, share_range, t, rng) for t in t_range]


def dealer_share_rows(
    M: int,
    share_range: ShareRange,
    t_range: Iterable[int],
    rows: int,
    rng: RandomSource,
) -> dict[int, ShareRows]:
    """Independent share sets for each of `rows` components, per time step."""
    return {
        t: tuple(deal(M, share_range, t, rng) for _ in range(rows)) for t in t_range
    }


def dealer_unit_shares(
    M: int, N: int, t_range: Iterable[int], rng: RandomSource
) -> dict[int, ShareRows]:
    """Agent shares that are units mod `N`, closed by an integer aggregator
    share."""
    out = {}
    for t in t_range:
        agent = tuple(sample_unit(N, rng) for _ in range(M))
        srange = ShareRange.bounded(N.bit_length())
        out[t] = (ZeroShareSet(t, agent, -sum(agent), srange),)
    return out


def dealer_weighted_shares(
    weights: Sequence[int],
    N: int,
    rng: RandomSource | None = None,
    shares: Sequence[int] | None = None,
) -> WeightedShareSet:
    """Sample units ``s_i`` of ``ℤ/N²ℤ`` and close with ``s_a = −Σ w_i s_i``.

    Examples
    --------
    >>> dealer_weighted_shares((2, 3), 35, shares=(5, 7)).aggregator_share
    -31
    """
    if shares is None:
        if rng is None:
            rng = RandomSource.cryptographic()
        shares = [sample_unit(N * N, rng) for _ in weights]
    s_a = -sum(w * s for w, s in zip(weights, shares, strict=True))
    return WeightedShareSet(tuple(shares), s_a, tuple(weights))


def dealer_weighted_share_matrix(
    weights: Sequence[Sequence[Sequence[int]]],
    N: int,
    rng: RandomSource,
) -> WeightedShareMatrixSet:
    """Matrix form: one unit share per input component of every agent."""
    agent = tuple(tuple(sample_unit(N * N, rng) for _ in W[0]) for W in weights)
    n_a = len(weights[0])
    s_a = tuple(
        -sum(
            w * s
            for W, s_i in zip(weights, agent, strict=True)
            for w, s in zip(W[k], s_i, strict=True)
        )
        for k in range(n_a)
    )
    frozen = tuple(tuple(tuple(int(v) for v in row) for row in W) for W in weights)
    return WeightedShareMatrixSet(agent, s_a, frozen)


def wrap_bound(M: int, l: int, N: int) -> int:  # noqa: E741
    """``M · 2^l · N²``, the largest ``|s_a|`` for `l`-bit weights and shares
    below ``N²``."""
    return M * (1 << l) * N * N


def dealer_wrap(
    enc_weights: Sequence[Ciphertext], shares: Sequence[int]
) -> Ciphertext:
    """Dealer side: ``E'(s_a) = Π E'(w_i)^(−s_i)`` without learning ``w_i``."""
    return hom_sum(
        [hom_scale(c, -s) for c, s in zip(enc_weights, shares, strict=True)]
    )


def dealer_assisted_weighted(
    helper: PaillierKeyPair,
    enc_weights: Sequence[Ciphertext],
    shares: Sequence[int],
    N: int,
    l: int,  # noqa: E741
) -> int:
    """Compute ``s_a`` through the aggregator's helper key.

    The weights are only known to the aggregator, encrypted under its helper
    key ``N'``. The dealer combines them with its secret ``s_i``, the
    aggregator decrypts the residue and center-lifts it.

    Parameters
    ----------
    helper
        the aggregator's helper key pair (modulus ``N'``).
    enc_weights
        ``E'(w_i)`` for every agent.
    shares
        the dealer's ``s_i``, below ``N²``.
    N
        modulus of the aggregation scheme.
    l
        bit width of the weights.

    Raises
    ------
    DealerWrapError
        if ``N' ≤ 2·M·2^l·N²``, or the recovered share exceeds that bound.
    """
    bound = wrap_bound(len(shares), l, N)
    if helper.N <= 2 * bound:
        bits = helper.N.bit_length()
        msg = f"helper modulus of {bits} bits cannot carry |s_a| < {bound}"
        raise DealerWrapError(msg)

    rho = decrypt(helper, dealer_wrap(enc_weights, shares))
    s_a = center_lift(rho, helper.N)
    if abs(s_a) > bound:
        msg = f"recovered aggregator share {s_a} exceeds {bound}"
        raise DealerWrapError(msg)
    return s_a
