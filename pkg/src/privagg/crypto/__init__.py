"""Paillier encryption and ciphertext operation accounting."""

from __future__ import annotations

from .counters import OpCounter, counting, tally
from .paillier import (
    Ciphertext,
    DecryptionError,
    ModulusMismatchError,
    PaillierKeyPair,
    PublicKey,
    decrypt,
    deserialize,
    encrypt,
    encrypt_add,
    fingerprint,
    gamma_dlog,
    hom_add,
    hom_scale,
    hom_sum,
    payload_size,
    rerandomize,
    serialize,
    wire_size,
)

__all__ = [
    "Ciphertext",
    "DecryptionError",
    "ModulusMismatchError",
    "OpCounter",
    "PaillierKeyPair",
    "PublicKey",
    "counting",
    "decrypt",
    "deserialize",
    "encrypt",
    "encrypt_add",
    "fingerprint",
    "gamma_dlog",
    "hom_add",
    "hom_scale",
    "hom_sum",
    "payload_size",
    "rerandomize",
    "serialize",
    "tally",
    "wire_size",
]
