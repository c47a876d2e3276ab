from __future__ import annotations

import logging
from collections.abc import Sequence

from ..exceptions import OracleMismatchError
from ..numeric import RandomSource
from .base import AggregationScheme

log = logging.getLogger(__name__)

# identifiers accepted by scheme_class(), mapped to class names
_scheme_ids = {
    "psa1": "PSA1",
    "psa2": "PSA2",
    "pwsac": "PWSAc",
    "pwsah": "PWSAh",
    "pwsah*": "PWSAhPacked",
    "pwsah_packed": "PWSAhPacked",
}


def scheme_class(ident: str | type[AggregationScheme]) -> type[AggregationScheme]:
    """Resolve a scheme identifier such as ``"pwsah*"`` or a class name."""
    if isinstance(ident, type) and issubclass(ident, AggregationScheme):
        return ident

    from . import packed, psa, pwsac, pwsah  # noqa: PLC0415

    classes = {
        cls.__name__: cls
        for cls in (psa.PSA1, psa.PSA2, pwsac.PWSAc, pwsah.PWSAh, packed.PWSAhPacked)
    }
    key = str(ident).strip()
    name = _scheme_ids.get(key.lower(), key)
    if name not in classes:
        msg = f"unknown scheme '{ident}'"
        raise ValueError(msg)
    return classes[name]


def setup(
    ident: str, weights: Sequence, rng: RandomSource, **kwargs
) -> AggregationScheme:
    """``scheme_class(ident).setup(weights, ...)``.

    Keyword arguments are passed on unchanged, so they must match the
    chosen scheme's :meth:`setup`.
    """
    cls = scheme_class(ident)
    log.debug(f"setting up {cls.scheme_id} for {len(weights)} agent(s)")
    if cls.scheme_id == "psa1":
        kwargs.setdefault("l", 32)
        return cls.setup(weights, kwargs.pop("l"), rng, **kwargs)
    return cls.setup(weights, rng, **kwargs)


def run(
    instance: AggregationScheme,
    xs: Sequence,
    t: int = 0,
    rng: RandomSource | None = None,
    check: bool = True,
) -> int | tuple[int, ...]:
    """Encrypt and aggregate `xs`, checked against the plaintext oracle.

    Raises
    ------
    OracleMismatchError
        if `check` is set and the aggregate differs from ``Σ_i W_i x_i``.
    """
    result = instance.run(xs, t, rng)
    if check:
        expected = instance.oracle(xs)
        if result != expected:
            msg = f"aggregate {result} differs from plaintext {expected}"
            raise OracleMismatchError(msg, instance.scheme_id, t)
    return result
