"""Additive shares of zero.

Shares come from a trusted dealer (:mod:`.dealer`) or from the participants
themselves over the communication graph (:mod:`.decentralized`). Toy-scale
masking distances live in :mod:`.bounds`, which is not imported here to
keep Numba compilation off the import path.
"""

from __future__ import annotations

from .dealer import (
    DealerWrapError,
    dealer_assisted_weighted,
    dealer_share_rows,
    dealer_shares,
    dealer_unit_shares,
    dealer_weighted_share_matrix,
    dealer_weighted_shares,
    dealer_wrap,
    wrap_bound,
)
from .decentralized import (
    DecentralizedShares,
    gcd_repair,
    one_round_decentralized,
    split_zero,
    two_round_relay,
)
from .envelope import PairwiseKeyring, ShareEnvelope, open_envelope, seal
from .shares import (
    ShareRange,
    ShareRows,
    WeightedShareMatrixSet,
    WeightedShareSet,
    ZeroShareSet,
)

__all__ = [
    "DealerWrapError",
    "DecentralizedShares",
    "PairwiseKeyring",
    "ShareEnvelope",
    "ShareRange",
    "ShareRows",
    "WeightedShareMatrixSet",
    "WeightedShareSet",
    "ZeroShareSet",
    "dealer_assisted_weighted",
    "dealer_share_rows",
    "dealer_shares",
    "dealer_unit_shares",
    "dealer_weighted_share_matrix",
    "dealer_weighted_shares",
    "dealer_wrap",
    "gcd_repair",
    "one_round_decentralized",
    "open_envelope",
    "seal",
    "split_zero",
    "two_round_relay",
    "wrap_bound",
]
