"""Private sum aggregation without weights hidden from the agents.

:class:`PSA1` masks ``v_i = W_i x_i`` with shares of zero modulo ``Q``.
:class:`PSA2` hides ``v_i`` in the exponent, ``c_i = (1+N)^{v_i} H(t)^{s_i}``,
and needs only one initial set of shares. Its multi-dimensional form packs
the rows of ``v_i`` into one group element per slot group.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from typing import ClassVar

from .. import settings
from ..crypto import gamma_dlog, tally
from ..encoding import (
    EncodingParams,
    center_lift,
    drop_offset,
    lift_offset,
    pack,
    split_groups,
    unpack,
)
from ..exceptions import ProtocolError
from ..numeric import RandomSource, gen_modulus, mod_pow_signed
from ..utils import clog2
from ..zeroshares import ShareRange, ShareRows, dealer_share_rows
from .base import (
    ALL_STEPS,
    AggregationScheme,
    Contribution,
    HashSpec,
    as_matrix,
    as_vector,
    check_shapes,
    derive_round_base,
    matvec,
)

log = logging.getLogger(__name__)


def psa1_modulus(l: int, M: int, n: int = 1, kappa: int | None = None) -> int:  # noqa: E741
    """``Q = 2^max(κ, 2l+⌈log₂M⌉+⌈log₂n⌉+1)``.

    The exponent is read in bits: a ``Q`` of this size holds every signed
    aggregate of `M` products of `l`-bit values without wrapping.
    """
    if kappa is None:
        kappa = settings.DEFAULT_SETTINGS["kappa"]
    return 1 << max(kappa, 2 * l + clog2(M) + clog2(n) + 1)


@dataclass(frozen=True)
class PSA1(AggregationScheme):
    """Masked residues modulo `Q`; each agent knows its own weights."""

    scheme_id: ClassVar[str] = "psa1"
    contribution_kind: ClassVar[str] = "residue"

    Q: int

    @classmethod
    def setup(
        cls,
        weights: Sequence[int | Sequence[Sequence[int]]],
        l: int,  # noqa: E741
        rng: RandomSource,
        T: int = 1,
        kappa: int | None = None,
        Q: int | None = None,
        l_f: int = 0,
    ) -> PSA1:
        """Deal ``T`` steps of mod-``Q`` shares, one set per output row.

        Parameters
        ----------
        weights
            per agent, a scalar or an ``n_a × n_i`` matrix.
        l
            bit width of inputs and weights.
        rng
            the dealer's random source.
        T
            number of time steps to provision.
        kappa, Q
            security parameter used to size ``Q``, or ``Q`` itself.
        l_f
            fractional bits, for :meth:`decode`.
        """
        W = tuple(as_matrix(w) for w in weights)
        check_shapes(W)
        if Q is None:
            Q = psa1_modulus(l, len(W), max(len(Wi[0]) for Wi in W), kappa)
        shares = dealer_share_rows(
            len(W), ShareRange.mod_q(Q), range(T), len(W[0]), rng
        )
        return cls(W, shares, l_f, Q)

    @property
    def element_bits(self) -> int:
        return (self.Q - 1).bit_length()

    def payload_count(self, i: int) -> int:  # noqa: ARG002
        return self.n_a

    def with_weights(
        self, weights: Sequence, rng: RandomSource | None = None  # noqa: ARG002
    ) -> PSA1:
        W = tuple(as_matrix(w) for w in weights)
        check_shapes(W)
        return PSA1(W, self.shares, self.l_f, self.Q)

    def enc(
        self,
        i: int,
        x: int | Sequence[int],
        t: int,
        rng: RandomSource | None = None,  # noqa: ARG002
    ) -> Contribution:
        """``c_i^[k] = v_i^[k] + s_i^[k] mod Q`` with ``v_i = W_i x_i``.

        Examples
        --------
        >>> from privagg.zeroshares import ShareRange, ZeroShareSet
        >>> s = ZeroShareSet(0, (100, 50, 30), 76, ShareRange.mod_q(256))
        >>> W = (((2,),), ((1,),), ((1,),))
        >>> psa = PSA1(W, {}, 0, 256).with_shares(0, (s,))
        >>> psa.enc(1, 3, 0).payload
        (106,)
        """
        self._agent_check(i)
        rows: ShareRows = self.shares_for(t)
        v = matvec(self.weights[i - 1], as_vector(x))
        payload = tuple((v[k] + rows[k].share(i)) % self.Q for k in range(self.n_a))
        return Contribution(i, t, self.contribution_kind, payload)

    def aggr_dec(
        self,
        contributions: Sequence[Contribution] | Mapping[int, Contribution],
        t: int,
    ) -> int | tuple[int, ...]:
        by_agent = self._collect(contributions, t)
        rows: ShareRows = self.shares_for(t)
        out = []
        for k in range(self.n_a):
            total = rows[k].aggregator_share
            total += sum(c.payload[k] for c in by_agent.values())
            out.append(center_lift(total, self.Q))
        return self._result(out)


@dataclass(frozen=True)
class PSA2(AggregationScheme):
    """Values in the exponent of ``1+N``, masked by ``H(t)^{s_i}``.

    Without `params`, every agent sends one group element carrying ``w_i
    x_i mod N``. With `params`, the rows of ``W_i x_i`` are offset by
    ``2^γ`` and packed ``m`` per group element.
    """

    scheme_id: ClassVar[str] = "psa2"
    contribution_kind: ClassVar[str] = "group-element"

    N: int
    hash: HashSpec
    params: EncodingParams | None = None

    @classmethod
    def setup(
        cls,
        weights: Sequence[int | Sequence[Sequence[int]]],
        rng: RandomSource,
        kappa: int | None = None,
        N: int | None = None,
        l_i: int = 16,
        l_f: int = 0,
        packed: bool | None = None,
        hash_spec: HashSpec | None = None,
    ) -> PSA2:
        """Draw a modulus with discarded factorization and one set of shares.

        Shares are integers of ``2κ`` bits, closed by a signed ``s_a``.
        Multi-dimensional weights select the packed layout unless `packed`
        says otherwise.
        """
        W = tuple(as_matrix(w) for w in weights)
        check_shapes(W)
        M = len(W)
        if N is None:
            if kappa is None:
                kappa = settings.DEFAULT_SETTINGS["kappa"]
            N = gen_modulus(kappa, rng).N
        if hash_spec is None:
            hash_spec = HashSpec.for_modulus(N)
        if packed is None:
            packed = any(len(Wi) > 1 or len(Wi[0]) > 1 for Wi in W)

        params = None
        n_groups = 1
        if packed:
            n = max(len(Wi[0]) for Wi in W)
            params = EncodingParams.budgeted_psa(l_i, l_f, M, N.bit_length(), n=n)
            n_groups = len(split_groups(len(W[0]), params.m))
        elif len(W[0]) > 1:
            msg = "unpacked pSA2 carries a single output row"
            raise ValueError(msg)

        rows = dealer_share_rows(
            M, ShareRange.bounded(2 * N.bit_length()), [ALL_STEPS], n_groups, rng
        )
        return cls(W, rows, l_f, N, hash_spec, params)

    @property
    def groups(self) -> list[range]:
        if self.params is None:
            return [range(1)]
        return split_groups(self.n_a, self.params.m)

    @property
    def element_bits(self) -> int:
        return (self.N * self.N).bit_length()

    def payload_count(self, i: int) -> int:  # noqa: ARG002
        return len(self.groups)

    def with_weights(
        self, weights: Sequence, rng: RandomSource | None = None  # noqa: ARG002
    ) -> PSA2:
        W = tuple(as_matrix(w) for w in weights)
        check_shapes(W)
        return PSA2(W, self.shares, self.l_f, self.N, self.hash, self.params)

    def _plaintexts(self, v: Sequence[int]) -> list[int]:
        if self.params is None:
            return [v[0] % self.N]
        gamma, delta = self.params.gamma, self.params.delta
        return [
            pack([lift_offset(v[k], gamma) for k in rows], delta, self.N.bit_length())
            for rows in self.groups
        ]

    def enc(
        self,
        i: int,
        x: int | Sequence[int],
        t: int,
        rng: RandomSource | None = None,  # noqa: ARG002
    ) -> Contribution:
        """``c_i = (1 + v_i N) · H(t)^{s_i} mod N²`` per group."""
        self._agent_check(i)
        rows: ShareRows = self.shares_for(t)
        N2 = self.N * self.N
        h = derive_round_base(self.hash, t)
        v = matvec(self.weights[i - 1], as_vector(x))

        payload = []
        for g, p in enumerate(self._plaintexts(v)):
            tally("exps")
            tally("mults")
            mask = mod_pow_signed(h, rows[g].share(i), N2)
            payload.append((1 + p * self.N) * mask % N2)
        return Contribution(i, t, self.contribution_kind, tuple(payload))

    def aggr_dec(
        self,
        contributions: Sequence[Contribution] | Mapping[int, Contribution],
        t: int,
    ) -> int | tuple[int, ...]:
        """``V = H(t)^{s_a} · Π c_i``, then ``(V−1)/N``.

        Raises
        ------
        ProtocolError
            if ``V`` is not a power of ``1+N``, i.e. the shares do not cancel.
        """
        by_agent = self._collect(contributions, t)
        rows: ShareRows = self.shares_for(t)
        N2 = self.N * self.N
        h = derive_round_base(self.hash, t)

        out: list[int] = []
        for g, group in enumerate(self.groups):
            tally("exps")
            V = mod_pow_signed(h, rows[g].aggregator_share, N2)
            for c in by_agent.values():
                tally("mults")
                V = V * c.payload[g] % N2
            try:
                P = gamma_dlog(V, self.N)
            except ValueError as e:
                msg = "aggregate is not a power of 1+N, shares are inconsistent"
                raise ProtocolError(msg, 0, t) from e

            if self.params is None:
                out.append(center_lift(P, self.N))
            else:
                slots = unpack(P, self.params.delta, len(group))
                gamma = self.params.gamma
                out.extend(drop_offset(s, gamma, count=self.M) for s in slots)
        return self._result(out)

