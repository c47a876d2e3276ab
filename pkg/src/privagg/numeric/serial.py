"""Signed big-integer wire format.

Each value is laid out as a 4-byte big-endian magnitude length, one sign
byte (``0x00`` non-negative, ``0x01`` negative) and the magnitude in
big-endian order. Zero has an empty magnitude.
"""

from __future__ import annotations

from collections.abc import Iterable

_POS = 0x00
_NEG = 0x01


def encode_bigint(value: int) -> bytes:
    """Serialize a signed integer.

    Examples
    --------
    >>> encode_bigint(-258).hex()
    '00000002010102'
    """
    mag = abs(value)
    body = mag.to_bytes((mag.bit_length() + 7) // 8, "big")
    return len(body).to_bytes(4, "big") + bytes([_NEG if value < 0 else _POS]) + body


def decode_bigint(buf: bytes, offset: int = 0) -> tuple[int, int]:
    """Deserialize one integer starting at `offset`.

    Returns
    -------
    the value and the offset right after it.
    """
    if len(buf) < offset + 5:
        msg = f"truncated big-integer header at offset {offset}"
        raise ValueError(msg)

    length = int.from_bytes(buf[offset : offset + 4], "big")
    sign = buf[offset + 4]
    if sign not in (_POS, _NEG):
        msg = f"invalid sign byte {sign:#04x}"
        raise ValueError(msg)

    start = offset + 5
    end = start + length
    if len(buf) < end:
        msg = f"truncated big-integer body: need {length} bytes"
        raise ValueError(msg)

    mag = int.from_bytes(buf[start:end], "big")
    return (-mag if sign == _NEG else mag), end


def encode_bigint_vector(values: Iterable[int]) -> bytes:
    values = list(values)
    return len(values).to_bytes(4, "big") + b"".join(encode_bigint(v) for v in values)


def decode_bigint_vector(buf: bytes, offset: int = 0) -> tuple[list[int], int]:
    if len(buf) < offset + 4:
        msg = "truncated vector header"
        raise ValueError(msg)
    count = int.from_bytes(buf[offset : offset + 4], "big")
    offset += 4
    out = []
    for _ in range(count):
        v, offset = decode_bigint(buf, offset)
        out.append(v)
    return out, offset
