from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from ..numeric import RandomSource

RangeKind = Literal["mod-Q", "statistical", "slot"]


@dataclass(frozen=True)
class ShareRange:
    """Where agent shares are drawn from.

    ``mod-Q``
        uniform residues in ``[0, Q)``, zero-sum modulo ``Q``.
    ``statistical``
        integers in ``(0, 2^bits)``, zero-sum over the integers.
    ``slot``
        uniform in ``[0, 2^gamma)`` for one packed slot, zero-sum over the
        integers.
    """

    kind: RangeKind
    modulus: int | None = None
    bits: int | None = None

    def __post_init__(self) -> None:
        needs_modulus = self.kind in ("mod-Q", "slot")
        if needs_modulus and (self.modulus is None or self.modulus < 2):
            msg = f"{self.kind} shares need a modulus of at least 2"
            raise ValueError(msg)
        if self.kind == "statistical" and (self.bits is None or self.bits < 1):
            msg = "statistical shares need a positive bit width"
            raise ValueError(msg)
        if self.kind not in ("mod-Q", "statistical", "slot"):
            msg = f"unknown share range kind '{self.kind}'"
            raise ValueError(msg)

    @classmethod
    def mod_q(cls, Q: int) -> ShareRange:
        return cls("mod-Q", modulus=Q)

    @classmethod
    def statistical(cls, l: int, lam: int) -> ShareRange:  # noqa: E741
        """Shares in ``(0, 2^(λ+2l))``."""
        return cls("statistical", bits=lam + 2 * l)

    @classmethod
    def bounded(cls, bits: int) -> ShareRange:
        return cls("statistical", bits=bits)

    @classmethod
    def slot(cls, gamma: int) -> ShareRange:
        return cls("slot", modulus=1 << gamma)

    @property
    def is_modular(self) -> bool:
        return self.kind == "mod-Q"

    def sample(self, rng: RandomSource) -> int:
        if self.kind == "statistical":
            return rng.randrange(1, 1 << self.bits)
        return rng.randbelow(self.modulus)

    def close(self, total: int) -> int:
        """The share that brings `total` to zero."""
        if self.is_modular:
            return (-total) % self.modulus
        return -total

    def is_zero(self, total: int) -> bool:
        if self.is_modular:
            return total % self.modulus == 0
        return total == 0


@dataclass(frozen=True)
class ZeroShareSet:
    """Agent shares ``s_1..s_M`` and the aggregator share ``s_a`` of one time
    step, summing to zero.

    Participant ``0`` is the aggregator, agents are ``1..M``.

    Examples
    --------
    >>> ZeroShareSet(0, (100, 50, 30), 76, ShareRange.mod_q(256)).share(0)
    76
    """

    t: int
    agent_shares: tuple[int, ...]
    aggregator_share: int
    range: ShareRange

    def __post_init__(self) -> None:
        if not self.range.is_zero(sum(self.agent_shares) + self.aggregator_share):
            msg = f"shares at t={self.t} do not sum to zero"
            raise ValueError(msg)

    @property
    def M(self) -> int:
        return len(self.agent_shares)

    def share(self, pid: int) -> int:
        return self.aggregator_share if pid == 0 else self.agent_shares[pid - 1]


ShareRows = tuple[ZeroShareSet, ...]
"""One :class:`ZeroShareSet` per output row or packed slot."""


@dataclass(frozen=True)
class WeightedShareSet:
    """Agent shares ``s_i`` with ``s_a = −Σ w_i s_i`` over the integers."""

    agent_shares: tuple[int, ...]
    aggregator_share: int
    weights: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.agent_shares) != len(self.weights):
            msg = "one weight per agent share is required"
            raise ValueError(msg)
        total = sum(w * s for w, s in zip(self.weights, self.agent_shares, strict=True))
        if total + self.aggregator_share != 0:
            msg = "weighted shares do not cancel"
            raise ValueError(msg)


@dataclass(frozen=True)
class WeightedShareMatrixSet:
    """Per-component agent shares ``s_i^[j]`` and per-row aggregator shares
    ``s_a^[k] = −Σ_i Σ_j W_i[k][j] s_i^[j]``."""

    agent_shares: tuple[tuple[int, ...], ...]
    aggregator_shares: tuple[int, ...]
    weights: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self) -> None:
        for k, s_a in enumerate(self.aggregator_shares):
            total = sum(
                w * s
                for W, s_i in zip(self.weights, self.agent_shares, strict=True)
                for w, s in zip(W[k], s_i, strict=True)
            )
            if total + s_a != 0:
                msg = f"weighted shares of row {k} do not cancel"
                raise ValueError(msg)
