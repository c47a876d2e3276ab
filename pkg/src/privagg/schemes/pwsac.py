"""Weighted sums with weights known to the aggregator only.

Agents encrypt every input component ``x_i^[j]`` as ``(1+N)^x H(t)^{s_i^[j]}``.
The aggregator raises the components to its weights and multiplies, so it
learns ``Σ_i W_i x_i`` and nothing else. Packing does not apply: the
weights act on individual components.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from typing import ClassVar

from .. import settings
from ..crypto import Ciphertext, PaillierKeyPair, encrypt, gamma_dlog, tally
from ..encoding import center_lift
from ..exceptions import ProtocolError
from ..numeric import RandomSource, gen_modulus, mod_pow_signed, sample_unit
from ..zeroshares import (
    WeightedShareMatrixSet,
    WeightedShareSet,
    dealer_assisted_weighted,
    dealer_weighted_share_matrix,
)
from .base import (
    ALL_STEPS,
    AggregationScheme,
    Contribution,
    HashSpec,
    Matrix,
    as_matrix,
    as_vector,
    check_shapes,
    derive_round_base,
)

log = logging.getLogger(__name__)


def as_matrix_shares(
    shares: WeightedShareSet | WeightedShareMatrixSet,
) -> WeightedShareMatrixSet:
    """View scalar weighted shares as the 1×1 matrix case."""
    if isinstance(shares, WeightedShareMatrixSet):
        return shares
    return WeightedShareMatrixSet(
        tuple((s,) for s in shares.agent_shares),
        (shares.aggregator_share,),
        tuple(((w,),) for w in shares.weights),
    )


def encrypted_weights(
    helper: PaillierKeyPair, weights: Sequence[int], rng: RandomSource
) -> list[Ciphertext]:
    """``E'(w_i)`` as sent by the aggregator to the dealer."""
    return [encrypt(helper.public, w % helper.N, rng=rng) for w in weights]


def helper_shares(
    helper: PaillierKeyPair,
    weights: Sequence[Matrix],
    N: int,
    l: int,  # noqa: E741
    rng: RandomSource,
) -> WeightedShareMatrixSet:
    """Dealer-assisted shares: the dealer never sees the weights.

    The aggregator encrypts every weight under its helper key, the dealer
    folds in its unit shares and returns ``E'(s_a^[k])`` per row.
    """
    agent = tuple(tuple(sample_unit(N * N, rng) for _ in W[0]) for W in weights)
    flat_shares = [s for s_i in agent for s in s_i]
    s_a = []
    for k in range(len(weights[0])):
        enc_row = encrypted_weights(helper, [w for W in weights for w in W[k]], rng)
        s_a.append(dealer_assisted_weighted(helper, enc_row, flat_shares, N, l))
    return WeightedShareMatrixSet(agent, tuple(s_a), tuple(weights))


@dataclass(frozen=True)
class PWSAc(AggregationScheme):
    """Aggregator-held weights on top of the exponent encoding."""

    scheme_id: ClassVar[str] = "pwsac"
    contribution_kind: ClassVar[str] = "group-element"

    N: int
    hash: HashSpec

    @classmethod
    def setup(
        cls,
        weights: Sequence[int | Sequence[Sequence[int]]],
        rng: RandomSource,
        kappa: int | None = None,
        N: int | None = None,
        l_f: int = 0,
        hash_spec: HashSpec | None = None,
        helper: PaillierKeyPair | None = None,
        l: int = 32,  # noqa: E741
    ) -> PWSAc:
        """Generate ``N`` and one set of weighted shares.

        Parameters
        ----------
        weights
            the aggregator's weights, scalars or ``n_a × n_i`` matrices.
        rng
            random source of the dealer.
        kappa, N
            modulus size, or the modulus itself.
        l_f
            fractional bits, for :meth:`decode`.
        hash_spec
            round base, unit-only hash onto ``ℤ/N²ℤ`` by default.
        helper
            if given, the aggregator share is computed through this key so
            that the dealer never learns the weights.
        l
            bit width of the weights, sizes the helper check.
        """
        W = tuple(as_matrix(w) for w in weights)
        check_shapes(W)
        if N is None:
            if kappa is None:
                kappa = settings.DEFAULT_SETTINGS["kappa"]
            N = gen_modulus(kappa, rng).N
        if hash_spec is None:
            hash_spec = HashSpec.for_modulus(N)

        if helper is None:
            shares = dealer_weighted_share_matrix(W, N, rng)
        else:
            shares = helper_shares(helper, W, N, l, rng)
        return cls(W, {ALL_STEPS: shares}, l_f, N, hash_spec)

    def shares_for(self, t: int) -> WeightedShareMatrixSet:
        return as_matrix_shares(super().shares_for(t))

    @property
    def element_bits(self) -> int:
        return (self.N * self.N).bit_length()

    def payload_count(self, i: int) -> int:
        return self.n_i(i)

    def with_weights(
        self, weights: Sequence, rng: RandomSource | None = None  # noqa: ARG002
    ) -> PWSAc:
        """New aggregator weights, reusing the agents' shares.

        Only the aggregator shares ``s_a^[k]`` are recomputed.
        """
        W = tuple(as_matrix(w) for w in weights)
        check_shapes(W)
        shares = {}
        for t in self.shares:
            old = self.shares_for(t)
            s_a = tuple(
                -sum(
                    w * s
                    for Wi, s_i in zip(W, old.agent_shares, strict=True)
                    for w, s in zip(Wi[k], s_i, strict=True)
                )
                for k in range(len(W[0]))
            )
            shares[t] = WeightedShareMatrixSet(old.agent_shares, s_a, W)
        return PWSAc(W, shares, self.l_f, self.N, self.hash)

    def enc(
        self,
        i: int,
        x: int | Sequence[int],
        t: int,
        rng: RandomSource | None = None,  # noqa: ARG002
    ) -> Contribution:
        """``c_i^[j] = (1 + x^[j] N) · H(t)^{s_i^[j]} mod N²``."""
        self._agent_check(i)
        shares = self.shares_for(t)
        x = as_vector(x)
        s_i = shares.agent_shares[i - 1]
        if len(x) != len(s_i):
            msg = f"agent {i} holds {len(s_i)} share(s) but got {len(x)} input(s)"
            raise ProtocolError(msg, i, t)

        N2 = self.N * self.N
        h = derive_round_base(self.hash, t)
        payload = []
        for xj, s in zip(x, s_i, strict=True):
            tally("exps")
            tally("mults")
            payload.append((1 + (xj % self.N) * self.N) * mod_pow_signed(h, s, N2) % N2)
        return Contribution(i, t, self.contribution_kind, tuple(payload))

    def aggr_dec(
        self,
        contributions: Sequence[Contribution] | Mapping[int, Contribution],
        t: int,
    ) -> int | tuple[int, ...]:
        """Per row ``V^[k] = H(t)^{s_a^[k]} · Π_i Π_j (c_i^[j])^{W_i[k][j]}``."""
        by_agent = self._collect(contributions, t)
        shares = self.shares_for(t)
        N2 = self.N * self.N
        h = derive_round_base(self.hash, t)

        out = []
        for k in range(self.n_a):
            tally("exps")
            V = mod_pow_signed(h, shares.aggregator_shares[k], N2)
            for i, W in enumerate(self.weights, 1):
                for w, c in zip(W[k], by_agent[i].payload, strict=True):
                    tally("exps")
                    tally("mults")
                    V = V * mod_pow_signed(c, w, N2) % N2
            try:
                out.append(center_lift(gamma_dlog(V, self.N), self.N))
            except ValueError as e:
                msg = f"row {k} is not a power of 1+N, weighted shares do not cancel"
                raise ProtocolError(msg, 0, t) from e
        return self._result(out)

