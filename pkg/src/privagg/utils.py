"""Implements utilities for privagg."""

from __future__ import annotations

import logging
import os
from collections.abc import Iterator, MutableMapping
from typing import Any

log = logging.getLogger(__name__)


def getenv_bool(name: str, default: bool = False) -> bool:
    """Get environment value as a boolean, returning True for 1, t and true
    (caps-insensitive), and False for any other value and default if undefined.
    """
    val = os.getenv(name)
    if not val:
        return default
    return val.lower() in ("1", "t", "true")


def clog2(x: int) -> int:
    """Return ``⌈log₂ x⌉`` for a positive integer, computed exactly.

    Examples
    --------
    >>> clog2(1), clog2(6), clog2(8), clog2(50)
    (0, 3, 3, 6)
    """
    if x < 1:
        msg = f"ceil-log2 of non-positive value {x}"
        raise ValueError(msg)
    return (x - 1).bit_length()


def ceil_div(a: int, b: int) -> int:
    """Integer ceiling division for positive `b`."""
    return -(-a // b)


def fmtbytes(num: float, suffix: str = "B") -> str:
    """Returns formatted f-string for printing human-readable number of bytes."""
    for unit in ["", "k", "M", "G", "T"]:
        if abs(num) < 1024.0:
            return f"{num:3.1f} {unit}{suffix}"
        num /= 1024.0
    return f"{num:.1f} P{suffix}"


class NumbaDefaults(MutableMapping):
    """Bare-bones class to store some Numba default options. Defaults values
    are set from environment variables

    Examples
    --------
    Set all default option values for a kernel at once by expanding the
    provided dictionary:

    >>> from numba import njit
    >>> from privagg.utils import numba_defaults_kwargs as nb_kwargs
    >>> @njit(**nb_kwargs) # def kernel(...): ...

    Customize one argument but still set defaults for the others:

    >>> from privagg.utils import numba_defaults as nb_defaults
    >>> @njit(**nb_defaults(cache=False)) # def kernel(...): ...

    Override global options at runtime:

    >>> from privagg.utils import numba_defaults
    >>> # must set options before importing the numbified modules!
    >>> numba_defaults.cache = False
    >>> numba_defaults.boundscheck = True
    >>> from privagg.zeroshares import bounds
    """

    def __init__(self) -> None:
        self.cache: bool = getenv_bool("PRIVAGG_CACHE", default=True)
        self.boundscheck: bool = getenv_bool("PRIVAGG_BOUNDSCHECK", default=False)

    def __getitem__(self, item: str) -> Any:
        return self.__dict__[item]

    def __setitem__(self, item: str, val: Any) -> None:
        self.__dict__[item] = val

    def __delitem__(self, item: str) -> None:
        del self.__dict__[item]

    def __iter__(self) -> Iterator:
        return self.__dict__.__iter__()

    def __len__(self) -> int:
        return len(self.__dict__)

    def __call__(self, **kwargs) -> dict:
        mapping = self.__dict__.copy()
        mapping.update(**kwargs)
        return mapping

    def __str__(self) -> str:
        return str(self.__dict__)

    def __repr__(self) -> str:
        return str(self.__dict__)


numba_defaults = NumbaDefaults()
numba_defaults_kwargs = numba_defaults
