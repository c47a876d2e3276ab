"""Randomness services.

Every randomized operation in the package takes an explicit
:class:`RandomSource`. Sources are single-owner: participants get their own
stream through :meth:`RandomSource.spawn`.
"""

from __future__ import annotations

import hashlib
import logging
import secrets

import numpy as np

log = logging.getLogger(__name__)

_KINDS = ("cryptographic", "deterministic-test")


def _seed_bytes(seed: bytes | str | int) -> bytes:
    if isinstance(seed, bytes):
        return seed
    if isinstance(seed, str):
        return seed.encode()
    if isinstance(seed, int):
        return seed.to_bytes(max(1, (seed.bit_length() + 7) // 8), "big")

    msg = f"cannot use {type(seed).__name__} as a seed"
    raise TypeError(msg)


class RandomSource:
    """Source of uniform random integers and bytes.

    Two kinds are available: ``cryptographic`` draws from the operating
    system through :mod:`secrets`, ``deterministic-test`` replays a
    :class:`numpy.random.Generator` stream derived from the seed bytes, so
    identical seeds give identical streams byte-for-byte.

    Examples
    --------
    >>> from privagg.numeric import RandomSource
    >>> a = RandomSource.deterministic(b"golden")
    >>> b = RandomSource.deterministic(b"golden")
    >>> a.randbits(64) == b.randbits(64)
    True
    """

    def __init__(self, seed: bytes | str | int = b"", kind: str = "cryptographic"):
        if kind not in _KINDS:
            msg = f"unknown random source kind '{kind}'"
            raise ValueError(msg)

        self.seed = _seed_bytes(seed)
        self.kind = kind
        self._gen = None

        if kind == "deterministic-test":
            entropy = int.from_bytes(hashlib.sha256(self.seed).digest(), "big")
            self._gen = np.random.Generator(
                np.random.PCG64(np.random.SeedSequence(entropy))
            )

    @classmethod
    def deterministic(cls, seed: bytes | str | int) -> RandomSource:
        return cls(seed, kind="deterministic-test")

    @classmethod
    def cryptographic(cls) -> RandomSource:
        return cls(kind="cryptographic")

    @property
    def is_deterministic(self) -> bool:
        return self.kind == "deterministic-test"

    def token_bytes(self, n: int) -> bytes:
        """Return `n` uniformly random bytes."""
        if n < 0:
            msg = f"negative byte count {n}"
            raise ValueError(msg)
        if self._gen is None:
            return secrets.token_bytes(n)
        return self._gen.bytes(n)

    def randbits(self, k: int) -> int:
        """Return a uniform integer in ``[0, 2^k)``."""
        if k < 0:
            msg = f"negative bit count {k}"
            raise ValueError(msg)
        if k == 0:
            return 0
        if self._gen is None:
            return secrets.randbits(k)

        nbytes = (k + 7) // 8
        return int.from_bytes(self._gen.bytes(nbytes), "big") >> (8 * nbytes - k)

    def randbelow(self, n: int) -> int:
        """Return a uniform integer in ``[0, n)`` by rejection sampling."""
        if n <= 0:
            msg = f"upper bound must be positive, got {n}"
            raise ValueError(msg)
        if self._gen is None:
            return secrets.randbelow(n)

        k = n.bit_length()
        while True:
            r = self.randbits(k)
            if r < n:
                return r

    def randrange(self, start: int, stop: int) -> int:
        """Return a uniform integer in ``[start, stop)``."""
        if stop <= start:
            msg = f"empty range [{start}, {stop})"
            raise ValueError(msg)
        return start + self.randbelow(stop - start)

    def spawn(self, label: str | int) -> RandomSource:
        """Derive an independent child source.

        Deterministic sources derive the child seed from the parent seed and
        `label` only, so the child stream does not depend on how much of the
        parent stream was already consumed.
        """
        if self._gen is None:
            return RandomSource.cryptographic()
        return RandomSource.deterministic(self.seed + b"/" + str(label).encode())

    def numpy_generator(self) -> np.random.Generator:
        """A :class:`numpy.random.Generator` seeded from this source."""
        return np.random.default_rng(self.randbits(128))

    def __repr__(self) -> str:
        if self._gen is None:
            return "RandomSource(kind='cryptographic')"
        return f"RandomSource(seed={self.seed!r}, kind='deterministic-test')"
