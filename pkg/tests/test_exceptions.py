from __future__ import annotations

import pickle

import pytest

from privagg.exceptions import (
    ConfigError,
    OracleMismatchError,
    OverflowGuardError,
    ProtocolError,
)


def test_messages():
    assert str(ProtocolError("boom")) == "while running protocol: boom"
    assert str(ProtocolError("boom", t=3)) == (
        "while running protocol at step t=3: boom"
    )
    assert str(ProtocolError("boom", 2)) == "while running participant 2: boom"
    assert str(ProtocolError("boom", 2, 3)) == (
        "while running participant 2 at step t=3: boom"
    )
    assert str(OverflowGuardError("too big", 1, 4)) == "agent 1 at step t=4: too big"
    assert str(ConfigError("bad", "a.cfg")) == "while reading config a.cfg: bad"
    assert str(ConfigError("bad", "a.cfg", "M")) == (
        "while reading key 'M' in config a.cfg: bad"
    )
    assert str(OracleMismatchError("off", "pwsah")) == "scheme pwsah: off"
    assert str(OracleMismatchError("off", "pwsah", 0)) == (
        "scheme pwsah at step t=0: off"
    )


@pytest.mark.parametrize(
    ("ex", "attrs"),
    [
        (ProtocolError("message", 2, 5), ("participant", "t")),
        (ProtocolError("message"), ("participant", "t")),
        (OverflowGuardError("message", 1, 7), ("agent", "t")),
        (ConfigError("message", "file.cfg", "kappa"), ("file", "key")),
        (OracleMismatchError("message", "pwsah*", 3), ("scheme", "t")),
    ],
)
def test_pickle(ex, attrs):
    # worker threads and processes hand exceptions back pickled
    back = pickle.loads(pickle.dumps(ex))
    assert type(back) is type(ex)
    assert str(back) == str(ex)
    for a in attrs:
        assert getattr(back, a) == getattr(ex, a)
