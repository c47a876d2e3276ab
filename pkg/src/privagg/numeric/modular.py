"""Signed modular arithmetic on arbitrary-precision integers."""

from __future__ import annotations

import logging
import math

import gmpy2

from .random import RandomSource

log = logging.getLogger(__name__)


class NotInvertibleError(ArithmeticError):
    """A residue with no inverse was raised to a negative power."""


def is_unit(x: int, modulus: int) -> bool:
    return math.gcd(x % modulus, modulus) == 1


def mod_inverse(x: int, modulus: int) -> int:
    """Return ``x⁻¹ mod modulus``, raising :class:`NotInvertibleError` if
    `x` is not a unit."""
    try:
        return int(gmpy2.invert(x, modulus))
    except ZeroDivisionError as e:
        msg = f"{x} is not invertible modulo {modulus}"
        raise NotInvertibleError(msg) from e


def mod_pow_signed(base: int, exp: int, modulus: int) -> int:
    """Compute ``base^exp mod modulus`` for a signed exponent.

    Negative exponents go through the modular inverse of `base`. Exponents
    are never reduced: zero-share cancellation happens in a group of
    unknown order.

    Parameters
    ----------
    base
        residue.
    exp
        signed exponent.
    modulus
        positive modulus.

    Examples
    --------
    >>> mod_pow_signed(2, 5, 35)
    32
    >>> mod_pow_signed(2, -1, 35)
    18
    """
    if modulus < 1:
        msg = f"modulus must be positive, got {modulus}"
        raise ValueError(msg)

    if exp < 0:
        base = mod_inverse(base, modulus)
        exp = -exp

    return int(gmpy2.powmod(base, exp, modulus))


def sample_unit(modulus: int, rng: RandomSource) -> int:
    """Sample a uniform element of the multiplicative group mod `modulus`.

    Candidates are drawn uniformly from ``[1, modulus)`` and rejected until
    ``gcd(r, modulus) = 1``.
    """
    if modulus < 2:
        msg = f"modulus must be at least 2, got {modulus}"
        raise ValueError(msg)

    while True:
        r = rng.randrange(1, modulus)
        if math.gcd(r, modulus) == 1:
            return r
        log.debug(f"rejected non-unit candidate {r} modulo {modulus}")
