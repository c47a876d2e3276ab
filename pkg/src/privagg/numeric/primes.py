"""Prime pair and RSA-type modulus generation."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import gmpy2

from .. import settings
from .random import RandomSource

log = logging.getLogger(__name__)


class ModulusGenerationError(ArithmeticError):
    """No valid prime pair was found within the retry budget."""


def is_probable_prime(n: int, rounds: int | None = None) -> bool:
    """Primality test.

    Below ``DEFAULT_SETTINGS["toy_prime_limit"]`` the answer is exact (trial
    division), above it Miller-Rabin with ``DEFAULT_SETTINGS
    ["miller_rabin_rounds"]`` rounds is used.
    """
    if n < 2:
        return False
    if n < settings.DEFAULT_SETTINGS["toy_prime_limit"]:
        if n % 2 == 0:
            return n == 2
        return all(n % d != 0 for d in range(3, math.isqrt(n) + 1, 2))

    if rounds is None:
        rounds = settings.DEFAULT_SETTINGS["miller_rabin_rounds"]
    return bool(gmpy2.is_prime(n, rounds))


def is_valid_pair(p: int, q: int) -> bool:
    """Check that `p`, `q` are distinct primes of equal bit length with
    ``gcd(φ(pq), pq) = 1``.

    Examples
    --------
    >>> is_valid_pair(5, 7)
    True
    >>> is_valid_pair(3, 7)  # gcd(12, 21) = 3
    False
    """
    if p == q or p.bit_length() != q.bit_length():
        return False
    if not (is_probable_prime(p) and is_probable_prime(q)):
        return False
    return math.gcd((p - 1) * (q - 1), p * q) == 1


@dataclass(frozen=True)
class BigModulus:
    """An RSA-type modulus ``N = pq``.

    `factors` is only populated for the key owner.
    """

    N: int
    factors: tuple[int, int] | None = None

    def __post_init__(self) -> None:
        if self.N < 2:
            msg = f"modulus must be at least 2, got {self.N}"
            raise ValueError(msg)
        if self.factors is not None:
            p, q = self.factors
            if p * q != self.N:
                msg = f"factors {p}, {q} do not multiply to {self.N}"
                raise ValueError(msg)

    @classmethod
    def from_factors(cls, p: int, q: int) -> BigModulus:
        """Build a modulus from a validated prime pair."""
        if not is_valid_pair(p, q):
            msg = f"({p}, {q}) is not a valid prime pair"
            raise ValueError(msg)
        return cls(p * q, (p, q))

    @property
    def bit_length(self) -> int:
        return self.N.bit_length()

    @property
    def phi(self) -> int:
        if self.factors is None:
            msg = "φ(N) requires the factorization of N"
            raise ValueError(msg)
        p, q = self.factors
        return (p - 1) * (q - 1)

    def public(self) -> BigModulus:
        """The same modulus without its factorization."""
        return BigModulus(self.N)


def _random_prime(bits: int, rng: RandomSource) -> int:
    top = 1 << (bits - 1)
    for _ in range(settings.DEFAULT_SETTINGS["prime_candidate_retries"]):
        cand = rng.randbits(bits) | top | 1
        if is_probable_prime(cand):
            return cand

    msg = f"no {bits}-bit prime found"
    raise ModulusGenerationError(msg)


def gen_modulus(kappa: int, rng: RandomSource) -> BigModulus:
    """Generate ``N = pq`` with exactly `kappa` bits.

    `p` and `q` are distinct primes of ``⌈kappa/2⌉`` bits each. Pairs whose
    product has the wrong length, or with ``gcd(φ(N), N) ≠ 1``, are
    discarded; after ``DEFAULT_SETTINGS["prime_pair_retries"]`` failures a
    :class:`ModulusGenerationError` is raised.

    Parameters
    ----------
    kappa
        bit length of `N`, at least 6.
    rng
        random source.

    Examples
    --------
    >>> gen_modulus(6, RandomSource.deterministic(0)).N
    35
    """
    if kappa < 6:
        msg = f"kappa must be at least 6, got {kappa}"
        raise ValueError(msg)

    half = (kappa + 1) // 2
    retries = settings.DEFAULT_SETTINGS["prime_pair_retries"]
    for attempt in range(retries):
        p = _random_prime(half, rng)
        q = _random_prime(half, rng)
        n = p * q
        if n.bit_length() != kappa:
            log.debug(
                f"attempt {attempt}: {n.bit_length()}-bit product, wanted {kappa}"
            )
            continue
        if not is_valid_pair(p, q):
            log.debug(f"attempt {attempt}: rejected prime pair")
            continue

        log.debug(f"generated {kappa}-bit modulus after {attempt + 1} attempt(s)")
        return BigModulus(n, (p, q))

    msg = f"no valid prime pair for kappa={kappa} after {retries} attempts"
    raise ModulusGenerationError(msg)
