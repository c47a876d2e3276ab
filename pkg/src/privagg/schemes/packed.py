"""Packed weight-hiding aggregation.

The weight matrices are column-packed and encrypted once, so an agent
spends one ciphertext-scalar multiplication per input component and group
of ``m`` rows instead of one per matrix entry. Every slot of the aggregate
holds

    ``Σ W x + n·2^{2γ} + 2^γ(Σ W + Σ x) + s + 2^γ z``,

and only the residue modulo ``2^γ`` is used. The agent shares ``s`` act as
a one-time pad on it and the noise ``z`` hides the terms above ``2^γ``.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from typing import ClassVar

from .. import settings
from ..crypto import (
    Ciphertext,
    PaillierKeyPair,
    decrypt,
    encrypt,
    encrypt_add,
    hom_scale,
    hom_sum,
)
from ..encoding import (
    EncodingParams,
    SlotOverflowError,
    center_lift,
    column_pack_groups,
    lift_offset,
    pack,
    split_groups,
    unpack,
)
from ..numeric import RandomSource
from ..utils import clog2
from ..zeroshares import ShareRange, ShareRows, dealer_share_rows
from .base import (
    AggregationScheme,
    Contribution,
    Matrix,
    as_matrix,
    as_vector,
    check_shapes,
    check_signed_bits,
)

log = logging.getLogger(__name__)

PackedColumns = tuple[tuple[Ciphertext, ...], ...]
"""Per row group, one ciphertext per column."""


def noise_bits(l: int, lam: int, n_i: int) -> int:  # noqa: E741
    """Width of the per-slot noise ``z ∈ (0, 2^(l+1+λ+⌈log₂n_i⌉))``."""
    return l + 1 + lam + clog2(n_i)


def slot_bound(params: EncodingParams, n_is: Sequence[int]) -> int:
    """Largest value one aggregated slot can reach.

    Each agent adds ``n_i`` offset products, each below
    ``(2^γ + 2^(l−1))²``, and a mask ``s + 2^γ z``.
    """
    one = 1 << params.gamma
    product = (one + (1 << (params.l - 1))) ** 2
    return sum(
        n * product + (one - 1) + one * ((1 << noise_bits(params.l, params.lam, n)) - 1)
        for n in n_is
    )


def check_slot_capacity(params: EncodingParams, n_is: Sequence[int], bits: int) -> None:
    """Pre-flight check of the packing layout.

    Raises
    ------
    SlotOverflowError
        if a slot could carry into its neighbour, or the slots do not fit a
        `bits`-bit plaintext.
    """
    if not params.fits(bits):
        msg = f"{params.m} slots of {params.delta} bits do not fit {bits} bits"
        raise SlotOverflowError(msg)
    bound = slot_bound(params, n_is)
    if bound >= 1 << params.delta:
        msg = f"slot values reach 2^{bound.bit_length()}, above 2^{params.delta}"
        raise SlotOverflowError(msg)

    M = len(n_is)
    if M * max(n_is) * (1 << (2 * params.l - 2)) >= 1 << (params.gamma - 1):
        log.warning(
            f"worst-case aggregate of M={M} agents may exceed 2^{params.gamma - 1}, "
            "results are only exact while the true sum stays in range"
        )


def init_packed_weights(
    keypair: PaillierKeyPair,
    weights: Sequence[Matrix],
    params: EncodingParams,
    rng: RandomSource,
) -> tuple[PackedColumns, ...]:
    """Packed ``InitW``: encrypt the column packing of every ``W_i``."""
    pk = keypair.public
    return tuple(
        tuple(
            tuple(encrypt(pk, col, rng=rng) for col in group)
            for group in column_pack_groups(W, params.gamma, params.delta, params.m)
        )
        for W in weights
    )


@dataclass(frozen=True)
class PWSAhPacked(AggregationScheme):
    """One ciphertext per group of ``m`` output rows."""

    scheme_id: ClassVar[str] = "pwsah*"
    contribution_kind: ClassVar[str] = "ciphertext"

    keypair: PaillierKeyPair
    params: EncodingParams
    enc_columns: tuple[PackedColumns, ...]

    @classmethod
    def setup(
        cls,
        weights: Sequence[int | Sequence[Sequence[int]]],
        rng: RandomSource,
        T: int = 1,
        kappa: int | None = None,
        keypair: PaillierKeyPair | None = None,
        l_i: int = 16,
        l_f: int = 16,
        lam: int | None = None,
        params: EncodingParams | None = None,
    ) -> PWSAhPacked:
        """Key generation, bit budget, packed ``InitW`` and slot shares.

        Parameters
        ----------
        weights
            per agent an ``n_a × n_i`` matrix of raw fixed-point values.
        rng
            the dealer's random source.
        T
            number of time steps to provision.
        kappa, keypair
            size of a fresh aggregator key, or the key itself.
        l_i, l_f, lam
            fixed-point widths and statistical security parameter used
            when `params` is not given.
        params
            explicit packing layout.
        """
        W = tuple(as_matrix(w) for w in weights)
        check_shapes(W)
        if keypair is None:
            if kappa is None:
                kappa = settings.DEFAULT_SETTINGS["kappa"]
            keypair = PaillierKeyPair.generate(kappa, rng)
        if lam is None:
            lam = settings.DEFAULT_SETTINGS["lambda"]

        n_is = [len(Wi[0]) for Wi in W]
        bits = keypair.N.bit_length()
        if params is None:
            params = EncodingParams.budgeted(l_i, l_f, lam, max(n_is), len(W), bits)
        for Wi in W:
            check_signed_bits([w for row in Wi for w in row], params.l, "weight")
        check_slot_capacity(params, n_is, bits)

        shares = dealer_share_rows(
            len(W), ShareRange.slot(params.gamma), range(T), len(W[0]), rng
        )
        log.debug(
            f"packed pWSAh setup: gamma={params.gamma}, delta={params.delta}, "
            f"m={params.m}, {len(split_groups(len(W[0]), params.m))} group(s)"
        )
        enc_columns = init_packed_weights(keypair, W, params, rng)
        return cls(W, shares, params.l_f, keypair, params, enc_columns)

    @property
    def N(self) -> int:
        return self.keypair.N

    @property
    def element_bits(self) -> int:
        """A ciphertext counts as one κ-bit unit."""
        return self.N.bit_length()

    @property
    def groups(self) -> list[range]:
        return split_groups(self.n_a, self.params.m)

    def payload_count(self, i: int) -> int:  # noqa: ARG002
        return len(self.groups)

    def with_weights(
        self, weights: Sequence, rng: RandomSource | None = None
    ) -> PWSAhPacked:
        """Re-run the packed ``InitW`` under the same key and layout."""
        if rng is None:
            rng = RandomSource.cryptographic()
        W = tuple(as_matrix(w) for w in weights)
        check_shapes(W)
        check_slot_capacity(self.params, [len(Wi[0]) for Wi in W], self.N.bit_length())
        enc_columns = init_packed_weights(self.keypair, W, self.params, rng)
        return PWSAhPacked(
            W, self.shares, self.l_f, self.keypair, self.params, enc_columns
        )

    def enc(
        self, i: int, x: int | Sequence[int], t: int, rng: RandomSource | None = None
    ) -> Contribution:
        """Offset the inputs, scale the packed columns, add the packed mask.

        Per group: ``Π_c E(col_c)^{x_c + 2^γ} · E(ζ)`` with slot ``k`` of
        ``ζ`` equal to ``s_i^[k] + 2^γ z_i^[k]``.
        """
        self._agent_check(i)
        if rng is None:
            rng = RandomSource.cryptographic()
        rows: ShareRows = self.shares_for(t)
        x = as_vector(x)
        check_signed_bits(x, self.params.l, "input")
        gamma, delta = self.params.gamma, self.params.delta
        pk = self.keypair.public
        x_lift = [lift_offset(xj, gamma) for xj in x]
        zbits = noise_bits(self.params.l, self.params.lam, len(x))

        payload = []
        for cols, group in zip(self.enc_columns[i - 1], self.groups, strict=True):
            scaled = [hom_scale(c, xc) for c, xc in zip(cols, x_lift, strict=True)]
            acc = hom_sum(scaled)
            masks = [
                rows[k].share(i) % (1 << gamma)
                + (rng.randrange(1, 1 << zbits) << gamma)
                for k in group
            ]
            zeta = pack(masks, delta)
            payload.append(encrypt_add(pk, acc, zeta, rng=rng))
        return Contribution(i, t, self.contribution_kind, tuple(payload))

    def aggr_dec(
        self,
        contributions: Sequence[Contribution] | Mapping[int, Contribution],
        t: int,
    ) -> int | tuple[int, ...]:
        """Multiply, decrypt and unpack; unmask every slot modulo ``2^γ``.

        Groups are concatenated in row order.
        """
        by_agent = self._collect(contributions, t)
        rows: ShareRows = self.shares_for(t)
        modulus = 1 << self.params.gamma

        out = []
        for g, group in enumerate(self.groups):
            V = hom_sum([by_agent[i].payload[g] for i in sorted(by_agent)])
            slots = unpack(decrypt(self.keypair, V), self.params.delta, len(group))
            for k, slot in zip(group, slots, strict=True):
                out.append(center_lift(slot + rows[k].aggregator_share, modulus))
        return self._result(out)
