r"""Fixed-point encodings, signed liftings and multi-slot packing.

Rationals are encoded as ``round(x·2^l_f)`` (:func:`.encode_fixed`) and
lifted to non-negative integers either by an offset (:func:`.lift_offset`)
or modularly (:func:`.lift_mod`). Several lifted values share one
plaintext through :func:`.pack`; :func:`.bit_budget` picks the slot layout.

>>> from privagg import encoding
>>> encoding.lift_offset(-6, gamma=4)
10
"""

from __future__ import annotations

from .budget import BitBudget, EncodingParams, bit_budget, bit_budget_psa
from .fixed import (
    FixedPointValue,
    center_lift,
    decode_fixed,
    drop_offset,
    encode_fixed,
    lift_mod,
    lift_offset,
    quantize,
    round_half_away,
)
from .packing import (
    SlotOverflowError,
    column_pack_groups,
    column_pack_matrix,
    pack,
    split_groups,
    unpack,
)

__all__ = [
    "BitBudget",
    "EncodingParams",
    "FixedPointValue",
    "SlotOverflowError",
    "bit_budget",
    "bit_budget_psa",
    "center_lift",
    "column_pack_groups",
    "column_pack_matrix",
    "decode_fixed",
    "drop_offset",
    "encode_fixed",
    "lift_mod",
    "lift_offset",
    "pack",
    "quantize",
    "round_half_away",
    "split_groups",
    "unpack",
]
