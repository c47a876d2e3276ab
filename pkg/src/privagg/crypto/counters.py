"""Modular-operation tallies.

Ciphertext operations report to the :class:`OpCounter` bound with
:func:`counting` in the current context, if any. The simulator binds one
counter per participant handler, so work is attributed to whoever runs it.
"""

from __future__ import annotations

from collections.abc import Iterator
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import asdict, dataclass

KINDS = ("exps", "mults", "encs", "decs")


@dataclass
class OpCounter:
    """Counts of ciphertext–scalar multiplications (`exps`), ciphertext
    additions (`mults`), fresh encryptions (`encs`) and decryptions
    (`decs`)."""

    exps: int = 0
    mults: int = 0
    encs: int = 0
    decs: int = 0

    def __iadd__(self, other: OpCounter) -> OpCounter:
        for k in KINDS:
            setattr(self, k, getattr(self, k) + getattr(other, k))
        return self

    def asdict(self) -> dict[str, int]:
        return asdict(self)


_active: ContextVar[OpCounter | None] = ContextVar("privagg_op_counter", default=None)


@contextmanager
def counting(counter: OpCounter | None = None) -> Iterator[OpCounter]:
    """Bind `counter` (a fresh one if `None`) for the duration of the block.

    Examples
    --------
    >>> with counting() as ops:
    ...     c = hom_scale(c, 3)
    >>> ops.exps
    1
    """
    if counter is None:
        counter = OpCounter()
    token = _active.set(counter)
    try:
        yield counter
    finally:
        _active.reset(token)


def tally(kind: str, n: int = 1) -> None:
    if kind not in KINDS:
        msg = f"unknown operation kind '{kind}'"
        raise ValueError(msg)
    counter = _active.get()
    if counter is not None:
        setattr(counter, kind, getattr(counter, kind) + n)
