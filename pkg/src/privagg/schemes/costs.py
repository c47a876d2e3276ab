"""Closed-form operation counts of one agent contribution."""

from __future__ import annotations

from typing import NamedTuple

from ..encoding import bit_budget
from ..utils import ceil_div, clog2


class CostPrediction(NamedTuple):
    exps: int
    cipher_adds: int
    ciphertexts_sent: int
    share_bits_per_neighbor: int


def predict_costs(
    scheme_id: str,
    M: int,
    n_i: int,
    n_a: int,
    m: int | None = None,
    l: int = 32,  # noqa: E741
    lam: int = 80,
    n: int | None = None,
    plaintext_bits: int = 2048,
) -> CostPrediction:
    """Per-agent cost of one time step of the weight-hiding schemes.

    Parameters
    ----------
    scheme_id
        ``pwsah`` (naive, one ciphertext per row) or ``pwsah*`` (packed).
    M
        number of agents.
    n_i, n_a
        input and output dimension.
    m
        slots per ciphertext; computed with :func:`.bit_budget` when
        omitted.
    l, lam
        fixed-point width and statistical parameter, for the share sizes.
    n
        largest input dimension over all agents, `n_i` by default.
    plaintext_bits
        plaintext size used for the budget when `m` is omitted.

    Examples
    --------
    >>> predict_costs("pwsah", 50, 6, 6, m=10)[:3]
    (36, 30, 6)
    >>> predict_costs("pwsah*", 50, 6, 6, m=10)[:3]
    (6, 5, 1)
    """
    if min(M, n_i, n_a) < 1:
        msg = f"dimensions must be positive, got M={M}, n_i={n_i}, n_a={n_a}"
        raise ValueError(msg)
    if n is None:
        n = n_i

    if scheme_id == "pwsah":
        return CostPrediction(n_a * n_i, n_a * (n_i - 1), n_a, (2 * l + lam) * n_a)

    if scheme_id in ("pwsah*", "pwsah_packed"):
        if m is None:
            m = bit_budget(l, lam, n, M, plaintext_bits).m
        groups = ceil_div(n_a, m)
        gamma = 2 * l + 1 + clog2(n) + clog2(M)
        return CostPrediction(groups * n_i, groups * (n_i - 1), groups, gamma * groups)

    msg = f"no cost model for scheme '{scheme_id}'"
    raise ValueError(msg)


def reduction(naive: float, packed: float) -> float:
    """``1 − packed/naive``."""
    if naive == 0:
        return 0.0
    return 1.0 - packed / naive
