"""Weighted sums with weights hidden from every party.

A dealer encrypts the weights under the aggregator's Paillier key
(``InitW``). Agents compute ``Π_j E(W_i[k][j])^{x_i^[j]} · E(s_i^[k])``
homomorphically, one ciphertext per output row; the aggregator multiplies
the contributions, decrypts and adds its share of zero.
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
from ..encoding import center_lift
from ..numeric import RandomSource
from ..zeroshares import ShareRange, ShareRows, dealer_share_rows, dealer_unit_shares
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

EncryptedMatrix = tuple[tuple[Ciphertext, ...], ...]


def init_weights(
    keypair: PaillierKeyPair, weights: Sequence[Matrix], rng: RandomSource
) -> tuple[EncryptedMatrix, ...]:
    """``InitW``: every weight encrypted with fresh randomness."""
    pk = keypair.public
    return tuple(
        tuple(tuple(encrypt(pk, w % pk.N, rng=rng) for w in row) for row in W)
        for W in weights
    )


@dataclass(frozen=True)
class PWSAh(AggregationScheme):
    """One ciphertext per output row.

    `weights` is dealer material kept for the plaintext oracle and for
    re-running ``InitW``; agents only use `enc_weights`.
    """

    scheme_id: ClassVar[str] = "pwsah"
    contribution_kind: ClassVar[str] = "ciphertext"

    keypair: PaillierKeyPair
    enc_weights: tuple[EncryptedMatrix, ...]
    l: int = 32  # noqa: E741

    @classmethod
    def setup(
        cls,
        weights: Sequence[int | Sequence[Sequence[int]]],
        rng: RandomSource,
        T: int = 1,
        kappa: int | None = None,
        keypair: PaillierKeyPair | None = None,
        l: int = 32,  # noqa: E741
        lam: int | None = None,
        l_f: int = 0,
    ) -> PWSAh:
        """Key generation, ``InitW`` and ``T`` steps of dealer shares.

        Scalar instances get shares that are units modulo ``N``; otherwise
        shares are statistical, in ``(0, 2^(λ+2l))``.
        """
        W = tuple(as_matrix(w) for w in weights)
        check_shapes(W)
        for Wi in W:
            check_signed_bits([w for row in Wi for w in row], l, "weight")
        if keypair is None:
            if kappa is None:
                kappa = settings.DEFAULT_SETTINGS["kappa"]
            keypair = PaillierKeyPair.generate(kappa, rng)
        if lam is None:
            lam = settings.DEFAULT_SETTINGS["lambda"]

        M = len(W)
        n_a = len(W[0])
        if all(len(Wi) == 1 and len(Wi[0]) == 1 for Wi in W):
            shares = dealer_unit_shares(M, keypair.N, range(T), rng)
        else:
            srange = ShareRange.statistical(l, lam)
            shares = dealer_share_rows(M, srange, range(T), n_a, rng)
        log.debug(f"pWSAh setup: M={M}, n_a={n_a}, {keypair.N.bit_length()}-bit key")
        return cls(W, shares, l_f, keypair, init_weights(keypair, W, rng), l)

    @property
    def N(self) -> int:
        return self.keypair.N

    @property
    def element_bits(self) -> int:
        """A ciphertext counts as one κ-bit unit."""
        return self.N.bit_length()

    def payload_count(self, i: int) -> int:  # noqa: ARG002
        return self.n_a

    def with_weights(self, weights: Sequence, rng: RandomSource | None = None) -> PWSAh:
        """Re-run ``InitW`` for new weights under the same key."""
        if rng is None:
            rng = RandomSource.cryptographic()
        W = tuple(as_matrix(w) for w in weights)
        check_shapes(W)
        enc_weights = init_weights(self.keypair, W, rng)
        return PWSAh(W, self.shares, self.l_f, self.keypair, enc_weights, self.l)

    def enc(
        self, i: int, x: int | Sequence[int], t: int, rng: RandomSource | None = None
    ) -> Contribution:
        """``c_i^[k] = Π_j E(W_i[k][j])^{x^[j]} · E(s_i^[k])``.

        Examples
        --------
        With ``N = 35``, ``E(3)``, ``x = 4`` and ``s_1 = 2`` the contribution
        decrypts to ``14``.
        """
        self._agent_check(i)
        rows: ShareRows = self.shares_for(t)
        x = as_vector(x)
        check_signed_bits(x, self.l, "input")
        pk = self.keypair.public

        payload = []
        for k, enc_row in enumerate(self.enc_weights[i - 1]):
            acc = hom_sum([hom_scale(c, xj) for c, xj in zip(enc_row, x, strict=True)])
            payload.append(encrypt_add(pk, acc, rows[k].share(i) % pk.N, rng=rng))
        return Contribution(i, t, self.contribution_kind, tuple(payload))

    def aggr_dec(
        self,
        contributions: Sequence[Contribution] | Mapping[int, Contribution],
        t: int,
    ) -> int | tuple[int, ...]:
        """``D(Π_i c_i^[k]) + s_a^[k]``, center-lifted modulo ``N``."""
        by_agent = self._collect(contributions, t)
        rows: ShareRows = self.shares_for(t)
        out = []
        for k in range(self.n_a):
            V = hom_sum([by_agent[i].payload[k] for i in sorted(by_agent)])
            total = decrypt(self.keypair, V) + rows[k].aggregator_share
            out.append(center_lift(total, self.N))
        return self._result(out)
