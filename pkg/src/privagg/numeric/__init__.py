"""Arbitrary-precision modular arithmetic, prime generation and randomness.

Everything else in :mod:`privagg` is built on these primitives. Big-integer
arithmetic is delegated to :mod:`gmpy2`.
"""

from __future__ import annotations

from .modular import (
    NotInvertibleError,
    is_unit,
    mod_inverse,
    mod_pow_signed,
    sample_unit,
)
from .primes import (
    BigModulus,
    ModulusGenerationError,
    gen_modulus,
    is_probable_prime,
    is_valid_pair,
)
from .random import RandomSource
from .serial import (
    decode_bigint,
    decode_bigint_vector,
    encode_bigint,
    encode_bigint_vector,
)

__all__ = [
    "BigModulus",
    "ModulusGenerationError",
    "NotInvertibleError",
    "RandomSource",
    "decode_bigint",
    "decode_bigint_vector",
    "encode_bigint",
    "encode_bigint_vector",
    "gen_modulus",
    "is_probable_prime",
    "is_unit",
    "is_valid_pair",
    "mod_inverse",
    "mod_pow_signed",
    "sample_unit",
]
