"""Bit budgets for packed schemes."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import NamedTuple

from ..utils import clog2

log = logging.getLogger(__name__)


class BitBudget(NamedTuple):
    gamma: int
    delta: int
    m: int


def _capacity(plaintext_bits: int, delta: int) -> int:
    m = (plaintext_bits - 1) // delta
    if m == 0:
        msg = f"a {plaintext_bits}-bit plaintext cannot hold one {delta}-bit slot"
        raise ValueError(msg)
    return m


def bit_budget(l: int, lam: int, n: int, M: int, plaintext_bits: int) -> BitBudget:  # noqa: E741
    """Dimension the weight-hiding packed scheme.

    ``γ = 2l+1+⌈log₂n⌉+⌈log₂M⌉`` bounds the magnitude of every slot of
    ``Σ_i W_i x_i``; ``δ = max(l+2+⌈log₂n⌉+⌈log₂M⌉, λ) + 3l+4+2(⌈log₂n⌉+⌈log₂M⌉)``
    leaves room for the offsets and the statistical noise above the
    result; ``m = ⌊(bits−1)/δ⌋``.

    Examples
    --------
    >>> bit_budget(32, 80, 6, 50, 2048)
    BitBudget(gamma=74, delta=198, m=10)
    """
    logs = clog2(n) + clog2(M)
    gamma = 2 * l + 1 + logs
    delta = max(l + 2 + logs, lam) + 3 * l + 4 + 2 * logs
    return BitBudget(gamma, delta, _capacity(plaintext_bits, delta))


def bit_budget_psa(l: int, M: int, plaintext_bits: int) -> BitBudget:  # noqa: E741
    """Dimension the packed private sum (``γ = 2l+1``, ``δ = 2l+2+⌈log₂M⌉``)."""
    gamma = 2 * l + 1
    delta = 2 * l + 2 + clog2(M)
    return BitBudget(gamma, delta, _capacity(plaintext_bits, delta))


@dataclass(frozen=True)
class EncodingParams:
    """Fixed-point widths and packing layout shared by a scheme's parties.

    Parameters
    ----------
    l_i, l_f
        integer and fractional bits of every input.
    gamma
        offset/guard exponent.
    delta
        slot width.
    lam
        statistical security parameter.
    m
        slots per ciphertext.
    n, M
        column count and agent count used for sizing.
    """

    l_i: int
    l_f: int
    gamma: int
    delta: int
    lam: int
    m: int
    n: int = 1
    M: int = 1

    def __post_init__(self) -> None:
        if self.gamma <= self.l:
            msg = f"gamma={self.gamma} must exceed l={self.l}"
            raise ValueError(msg)
        if self.delta <= self.gamma:
            msg = f"delta={self.delta} must exceed gamma={self.gamma}"
            raise ValueError(msg)
        if self.m < 1:
            msg = f"slot capacity must be positive, got {self.m}"
            raise ValueError(msg)

    @property
    def l(self) -> int:  # noqa: E743
        return self.l_i + self.l_f

    def fits(self, plaintext_bits: int) -> bool:
        """``m·δ < plaintext_bits``."""
        return self.m * self.delta < plaintext_bits

    @classmethod
    def budgeted(
        cls, l_i: int, l_f: int, lam: int, n: int, M: int, plaintext_bits: int
    ) -> EncodingParams:
        b = bit_budget(l_i + l_f, lam, n, M, plaintext_bits)
        log.debug(f"budget for l={l_i + l_f}, n={n}, M={M}: {b}")
        return cls(l_i, l_f, b.gamma, b.delta, lam, b.m, n, M)

    @classmethod
    def budgeted_psa(
        cls, l_i: int, l_f: int, M: int, plaintext_bits: int, n: int = 1
    ) -> EncodingParams:
        b = bit_budget_psa(l_i + l_f, M, plaintext_bits)
        return cls(l_i, l_f, b.gamma, b.delta, 0, b.m, n, M)
