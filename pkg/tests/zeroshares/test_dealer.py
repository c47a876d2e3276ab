from __future__ import annotations

import math

import pytest

from privagg.crypto import encrypt
from privagg.zeroshares import (
    DealerWrapError,
    ShareRange,
    dealer_assisted_weighted,
    dealer_share_rows,
    dealer_shares,
    dealer_unit_shares,
    dealer_weighted_share_matrix,
    dealer_weighted_shares,
    wrap_bound,
)


def test_dealer_shares(rng):
    sets = dealer_shares(3, ShareRange.mod_q(256), range(4), rng)
    assert [s.t for s in sets] == [0, 1, 2, 3]
    for s in sets:
        assert s.M == 3
        assert (sum(s.agent_shares) + s.aggregator_share) % 256 == 0

    # independent between steps
    assert len({s.agent_shares for s in sets}) == 4

    with pytest.raises(ValueError):
        dealer_shares(0, ShareRange.mod_q(256), range(1), rng)


def test_dealer_single_agent(rng):
    (s,) = dealer_shares(1, ShareRange.bounded(16), [0], rng)
    assert s.aggregator_share == -s.agent_shares[0]


def test_dealer_share_rows(rng):
    rows = dealer_share_rows(3, ShareRange.statistical(8, 16), range(2), 2, rng)
    assert sorted(rows) == [0, 1]
    for t, sets in rows.items():
        assert len(sets) == 2
        for s in sets:
            assert s.t == t
            assert all(0 < v < 2**32 for v in s.agent_shares)
            assert sum(s.agent_shares) == -s.aggregator_share


def test_dealer_unit_shares(rng):
    rows = dealer_unit_shares(4, 35, range(3), rng)
    for (s,) in rows.values():
        assert all(math.gcd(v, 35) == 1 for v in s.agent_shares)
        assert s.aggregator_share == -sum(s.agent_shares)


def test_dealer_weighted_shares(rng):
    assert dealer_weighted_shares((2, 3), 35, shares=(5, 7)).aggregator_share == -31

    s = dealer_weighted_shares((2, -3, 4), 35, rng)
    assert all(math.gcd(v, 35) == 1 for v in s.agent_shares)
    assert all(0 < v < 1225 for v in s.agent_shares)


def test_dealer_weighted_share_matrix(rng):
    weights = (((1, 2), (0, -1)), ((3, 4), (1, 0)))
    s = dealer_weighted_share_matrix(weights, 35, rng)
    assert [len(s_i) for s_i in s.agent_shares] == [2, 2]
    assert len(s.aggregator_shares) == 2
    assert s.weights == weights


def test_wrap_bound():
    assert wrap_bound(2, 4, 35) == 39200


def test_dealer_assisted_weighted(key256, toy_key, rng):
    weights = (2, -3)
    enc = [encrypt(key256.public, w % key256.N, rng=rng) for w in weights]
    assert dealer_assisted_weighted(key256, enc, (5, 7), 35, 4) == 11

    enc = [encrypt(toy_key.public, w % 35, rng=rng) for w in weights]
    with pytest.raises(DealerWrapError):
        dealer_assisted_weighted(toy_key, enc, (5, 7), 35, 4)


@pytest.mark.parametrize(
    "share_range",
    [
        ShareRange.mod_q(256),
        ShareRange.bounded(16),
        ShareRange.statistical(8, 16),
        ShareRange.slot(6),
    ],
)
def test_dealt_shares_sum_to_zero(share_range, rng):
    for s in dealer_shares(4, share_range, range(1000), rng):
        total = sum(s.agent_shares) + s.aggregator_share
        if share_range.is_modular:
            assert total % 256 == 0
        else:
            assert total == 0


def test_unit_and_weighted_shares_sum_to_zero(rng):
    rows = dealer_unit_shares(3, 35, range(1000), rng)
    for (s,) in rows.values():
        assert all(math.gcd(v, 35) == 1 for v in s.agent_shares)
        assert sum(s.agent_shares) + s.aggregator_share == 0

    for _ in range(1000):
        weights = [rng.randrange(-128, 128) for _ in range(3)]
        s = dealer_weighted_shares(weights, 35, rng)
        weighted = sum(w * v for w, v in zip(weights, s.agent_shares, strict=True))
        assert weighted + s.aggregator_share == 0
        assert all(math.gcd(v, 35) == 1 for v in s.agent_shares)
