"""Fixed-point encoding of rationals and signed liftings."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class FixedPointValue:
    """Signed integer ``raw = round(x · 2^l_f)`` in ``[−2^(l−1), 2^(l−1))``."""

    raw: int
    l_i: int
    l_f: int

    def __post_init__(self) -> None:
        half = 1 << (self.l - 1)
        if not -half <= self.raw < half:
            msg = f"{self.raw} does not fit in {self.l} signed bits"
            raise OverflowError(msg)

    @property
    def l(self) -> int:  # noqa: E743
        return self.l_i + self.l_f

    def to_fraction(self) -> Fraction:
        return decode_fixed(self.raw, self.l_f)


def round_half_away(v: Fraction) -> int:
    """Round to the nearest integer, ties away from zero."""
    r = math.floor(abs(v) + Fraction(1, 2))
    return -r if v < 0 else r


def quantize(x: Rational | float | str, l_f: int) -> int:
    """``round(x · 2^l_f)`` with ties away from zero, without range check."""
    return round_half_away(Fraction(x) * (1 << l_f))


def encode_fixed(x: Rational | float | str, l_i: int, l_f: int) -> FixedPointValue:
    """Encode a rational with `l_i` integer and `l_f` fractional bits.

    Examples
    --------
    >>> encode_fixed(1.5, 2, 2).raw, encode_fixed(-1.5, 2, 2).raw
    (6, -6)
    """
    return FixedPointValue(quantize(x, l_f), l_i, l_f)


def decode_fixed(raw: int, l_f: int, scale_power: int = 1) -> Fraction:
    """Exact inverse scaling, ``raw / 2^(scale_power · l_f)``.

    Use ``scale_power=2`` for the product of two encoded values.
    """
    return Fraction(raw, 1 << (scale_power * l_f))


def lift_offset(y: int, gamma: int) -> int:
    """Shift a signed value with ``|y| < 2^gamma`` into ``[0, 2^(gamma+1))``.

    Examples
    --------
    >>> lift_offset(-6, 4)
    10
    """
    if abs(y) >= 1 << gamma:
        msg = f"|{y}| does not fit below 2^{gamma}"
        raise ValueError(msg)
    return y + (1 << gamma)


def drop_offset(v: int, gamma: int, count: int = 1, center: bool = False) -> int:
    """Remove `count` offsets of ``2^gamma`` from an aggregated slot.

    With `center`, the result is further center-lifted modulo ``2^gamma``.

    Examples
    --------
    >>> drop_offset(54, 4, count=3)
    6
    """
    y = v - count * (1 << gamma)
    if center:
        y = center_lift(y, 1 << gamma)
    return y


def lift_mod(y: int, N: int) -> int:
    """Signed value to its residue modulo `N`."""
    if 2 * abs(y) >= N:
        msg = f"|{y}| too large to center-lift back modulo {N}"
        raise ValueError(msg)
    return y % N


def center_lift(v: int, N: int) -> int:
    """Residue to its representative in ``[−⌊N/2⌋, ⌈N/2⌉)``.

    Examples
    --------
    >>> center_lift(29, 35)
    -6
    >>> center_lift(8, 16)
    -8
    """
    v %= N
    return v - N if 2 * v >= N else v
