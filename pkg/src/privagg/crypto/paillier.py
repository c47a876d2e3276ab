"""The Paillier additively homomorphic cryptosystem.

The generator is fixed to ``g = 1 + N`` so that ``g^m = 1 + mN mod N²`` and
encryption costs a single exponentiation ``r^N``. Decryption uses the easy
discrete logarithm in the subgroup ``{(1+N)^α mod N²}``.
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass, field

import gmpy2

from ..numeric import (
    BigModulus,
    RandomSource,
    decode_bigint,
    encode_bigint,
    gen_modulus,
    mod_inverse,
    mod_pow_signed,
    sample_unit,
)
from .counters import tally

log = logging.getLogger(__name__)


class DecryptionError(ValueError):
    """The ciphertext is malformed or was formed under another key."""


class ModulusMismatchError(ValueError):
    """Ciphertexts or keys under different moduli were combined."""


def fingerprint(N: int) -> bytes:
    """8-byte truncated SHA-256 digest of the serialized modulus."""
    return hashlib.sha256(encode_bigint(N)).digest()[:8]


@dataclass(frozen=True)
class PublicKey:
    N: int
    N2: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "N2", self.N * self.N)

    @property
    def g(self) -> int:
        return self.N + 1

    @property
    def kappa(self) -> int:
        return self.N.bit_length()

    @property
    def fingerprint(self) -> bytes:
        return fingerprint(self.N)


@dataclass(frozen=True)
class PaillierKeyPair:
    """Public key plus ``φ(N)`` and ``φ(N)⁻¹ mod N``.

    Examples
    --------
    >>> kp = PaillierKeyPair.from_primes(5, 7)
    >>> kp.phi, kp.phi_inv
    (24, 19)
    """

    public: PublicKey
    phi: int = field(repr=False)
    phi_inv: int = field(repr=False)

    def __post_init__(self) -> None:
        if (self.phi * self.phi_inv) % self.public.N != 1:
            msg = "φ(N)·φ(N)⁻¹ ≢ 1 mod N"
            raise ValueError(msg)

    @classmethod
    def from_modulus(cls, modulus: BigModulus) -> PaillierKeyPair:
        phi = modulus.phi
        return cls(PublicKey(modulus.N), phi, mod_inverse(phi, modulus.N))

    @classmethod
    def from_primes(cls, p: int, q: int) -> PaillierKeyPair:
        return cls.from_modulus(BigModulus.from_factors(p, q))

    @classmethod
    def generate(cls, kappa: int, rng: RandomSource) -> PaillierKeyPair:
        kp = cls.from_modulus(gen_modulus(kappa, rng))
        log.debug(f"generated {kappa}-bit Paillier key {kp.public.fingerprint.hex()}")
        return kp

    @property
    def N(self) -> int:
        return self.public.N

    @property
    def modulus_squared(self) -> int:
        return self.public.N2


@dataclass(frozen=True)
class Ciphertext:
    """A residue modulo ``N²`` tagged with its modulus `N`."""

    value: int
    N: int

    def __post_init__(self) -> None:
        if not 0 < self.value < self.N * self.N:
            msg = f"ciphertext value outside (0, N²) for N={self.N}"
            raise ValueError(msg)


def _check_plaintext(pk: PublicKey, m: int) -> None:
    if not 0 <= m < pk.N:
        msg = f"plaintext {m} outside [0, N) for N={pk.N}"
        raise ValueError(msg)


def _mask(pk: PublicKey, m: int, r: int | None, rng: RandomSource | None) -> int:
    _check_plaintext(pk, m)
    if r is None:
        r = sample_unit(pk.N, rng if rng is not None else RandomSource.cryptographic())
    tally("encs")
    return ((1 + m * pk.N) * int(gmpy2.powmod(r, pk.N, pk.N2))) % pk.N2


def encrypt(
    pk: PublicKey, m: int, r: int | None = None, rng: RandomSource | None = None
) -> Ciphertext:
    """Encrypt ``m ∈ [0, N)`` as ``(1+N)^m · r^N mod N²``.

    Parameters
    ----------
    pk
        public key.
    m
        plaintext residue.
    r
        randomness, a unit mod `N`. Sampled from `rng` when omitted.
    rng
        random source for `r`, cryptographic when omitted.

    Examples
    --------
    >>> encrypt(PublicKey(35), 2, r=1).value
    71
    """
    return Ciphertext(_mask(pk, m, r, rng), pk.N)


def encrypt_add(
    pk: PublicKey,
    c: Ciphertext,
    m: int,
    r: int | None = None,
    rng: RandomSource | None = None,
) -> Ciphertext:
    """Return ``c · E(m)``, tallied as a single encryption."""
    _same_modulus(pk.N, c.N)
    return Ciphertext((c.value * _mask(pk, m, r, rng)) % pk.N2, pk.N)


def rerandomize(pk: PublicKey, c: Ciphertext, rng: RandomSource) -> Ciphertext:
    return encrypt_add(pk, c, 0, rng=rng)


def gamma_dlog(y: int, N: int) -> int:
    """Discrete logarithm base ``1+N`` of ``y ≡ 1 mod N``, i.e. ``(y−1)/N``.

    Examples
    --------
    >>> gamma_dlog(456, 35)
    13
    """
    if (y - 1) % N != 0:
        msg = f"{y} is not in the subgroup generated by 1+N for N={N}"
        raise ValueError(msg)
    return ((y - 1) // N) % N


def decrypt(keypair: PaillierKeyPair, c: Ciphertext) -> int:
    """Recover the plaintext residue of `c`.

    Computes ``(c^φ − 1)/N · φ⁻¹ mod N`` and raises :class:`DecryptionError`
    when ``c^φ − 1`` is not divisible by `N`.
    """
    _same_modulus(keypair.N, c.N)
    tally("decs")
    u = int(gmpy2.powmod(c.value, keypair.phi, keypair.modulus_squared))
    try:
        beta = gamma_dlog(u, keypair.N)
    except ValueError as e:
        msg = "malformed ciphertext"
        raise DecryptionError(msg) from e
    return (beta * keypair.phi_inv) % keypair.N


def hom_add(c1: Ciphertext, c2: Ciphertext) -> Ciphertext:
    """``E(a) · E(b) = E(a + b)``."""
    _same_modulus(c1.N, c2.N)
    tally("mults")
    return Ciphertext((c1.value * c2.value) % (c1.N * c1.N), c1.N)


def hom_scale(c: Ciphertext, k: int) -> Ciphertext:
    """``E(a)^k = E(k·a)`` for a signed scalar `k`."""
    tally("exps")
    n2 = c.N * c.N
    try:
        return Ciphertext(mod_pow_signed(c.value, k, n2), c.N)
    except ArithmeticError as e:
        msg = "negative scalar on a non-invertible ciphertext"
        raise DecryptionError(msg) from e


def hom_sum(cs: list[Ciphertext]) -> Ciphertext:
    """Fold :func:`hom_add` over a non-empty list."""
    if not cs:
        msg = "cannot sum an empty list of ciphertexts"
        raise ValueError(msg)
    acc = cs[0]
    for c in cs[1:]:
        acc = hom_add(acc, c)
    return acc


def _same_modulus(n1: int, n2: int) -> None:
    if n1 != n2:
        msg = f"modulus mismatch: {fingerprint(n1).hex()} vs {fingerprint(n2).hex()}"
        raise ModulusMismatchError(msg)


def serialize(c: Ciphertext) -> bytes:
    """Modulus fingerprint followed by the big-integer encoding of the value."""
    return fingerprint(c.N) + encode_bigint(c.value)


def deserialize(buf: bytes, pk: PublicKey, offset: int = 0) -> tuple[Ciphertext, int]:
    if buf[offset : offset + 8] != pk.fingerprint:
        msg = "ciphertext was not formed under this key"
        raise ModulusMismatchError(msg)
    value, end = decode_bigint(buf, offset + 8)
    return Ciphertext(value, pk.N), end


def payload_size(kappa: int, count: int = 1) -> int:
    """Bytes for `count` ciphertexts counted as one `kappa`-bit unit each.

    Examples
    --------
    >>> payload_size(2048), payload_size(2048, 6)
    (256, 1536)
    """
    return count * ((kappa + 7) // 8)


def wire_size(c: Ciphertext) -> int:
    return len(serialize(c))
