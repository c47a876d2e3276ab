"""Line-oriented ``key = value`` configuration files.

Blank lines and ``#`` comments are ignored. Values are converted according
to the target dataclass; lists of agent values are separated by ``;``,
matrix rows by ``/`` and entries by ``,``::

    scheme = pwsah*
    weights = 1,-1/2,0 ; 3
    inputs = 3,1 ; 2
"""

from __future__ import annotations

import dataclasses
import logging
from collections.abc import Callable, Mapping
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import parse

from ..exceptions import ConfigError

log = logging.getLogger(__name__)

_LINE = parse.compile("{key}={value}")

SCHEMES = ("psa1", "psa2", "pwsac", "pwsah", "pwsah*")
CASE_STUDY_SCHEMES = ("pwsah", "pwsah*")
SHARE_MODES = ("dealer", "one-round", "two-round")


def parse_values(text: str) -> tuple:
    """Per-agent scalars, vectors or matrices.

    Examples
    --------
    >>> parse_values("3; 1,-1/2,0; 4,5")
    (3, ((1, -1), (2, 0)), (4, 5))
    """
    out: list[Any] = []
    for item in text.split(";"):
        item = item.strip()
        if not item:
            continue
        if "/" in item:
            rows = item.split("/")
            out.append(tuple(tuple(int(v) for v in row.split(",")) for row in rows))
        elif "," in item:
            out.append(tuple(int(v) for v in item.split(",")))
        else:
            out.append(int(item))
    return tuple(out)


def _bool(text: str) -> bool:
    if text.lower() in ("1", "true", "yes", "on"):
        return True
    if text.lower() in ("0", "false", "no", "off"):
        return False
    msg = f"not a boolean: '{text}'"
    raise ValueError(msg)


_converters: dict[str, Callable[[str], Any]] = {
    "int": int,
    "int | None": int,
    "float": float,
    "str": str,
    "str | None": str,
    "bool": _bool,
    "tuple": parse_values,
    "tuple | None": parse_values,
}


def read_config(path: str | Path) -> dict[str, str]:
    """Raw ``key → value`` strings of a config file.

    Raises
    ------
    ConfigError
        on a line that is not ``key = value`` or a repeated key.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        msg = f"cannot read config: {e.strerror}"
        raise ConfigError(msg, str(path)) from e

    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        result = _LINE.parse(line)
        if result is None:
            msg = f"line {lineno} is not 'key = value'"
            raise ConfigError(msg, str(path))
        key = result["key"].strip()
        if key in raw:
            msg = f"duplicate key on line {lineno}"
            raise ConfigError(msg, str(path), key)
        raw[key] = result["value"].strip()
    return raw


def _build(cls: type, raw: Mapping[str, str], file: str) -> Any:
    fields = {f.metadata.get("key", f.name): f for f in dataclasses.fields(cls)}
    kwargs = {}
    for key, value in raw.items():
        if key not in fields:
            msg = "unknown key"
            raise ConfigError(msg, file, key)
        f = fields[key]
        try:
            kwargs[f.name] = _converters[str(f.type)](value)
        except (ValueError, TypeError) as e:
            msg = f"bad value '{value}': {e}"
            raise ConfigError(msg, file, key) from e
    try:
        return cls(**kwargs)
    except ValueError as e:
        raise ConfigError(str(e), file) from e


@dataclass(frozen=True)
class CaseStudyConfig:
    """Networked control experiment.

    Each agent has ``n`` states and ``m_dim`` inputs, fixed-point values
    have ``l_i`` integer and ``l_f`` fractional bits.
    """

    M: int = 6
    n: int = 2
    m_dim: int = 2
    l_i: int = 8
    l_f: int = 8
    lam: int = dataclasses.field(default=16, metadata={"key": "lambda"})
    kappa: int = 256
    horizon: int = 20
    edge_prob: float = 0.5
    scheme: str = "pwsah*"
    share_mode: str = "dealer"
    seed: str = "privagg"
    coupling: float = 0.01

    def __post_init__(self) -> None:
        if self.scheme not in CASE_STUDY_SCHEMES:
            msg = f"scheme must be one of {CASE_STUDY_SCHEMES}, got '{self.scheme}'"
            raise ValueError(msg)
        if self.share_mode not in SHARE_MODES:
            msg = f"share_mode must be one of {SHARE_MODES}, got '{self.share_mode}'"
            raise ValueError(msg)
        if min(self.M, self.n, self.m_dim, self.horizon) < 1:
            msg = "M, n, m_dim and horizon must be positive"
            raise ValueError(msg)
        if not 0 <= self.edge_prob <= 1:
            msg = f"edge_prob must lie in [0, 1], got {self.edge_prob}"
            raise ValueError(msg)

    @property
    def l(self) -> int:  # noqa: E743
        return self.l_i + self.l_f


@dataclass(frozen=True)
class SchemeRunConfig:
    """One time step of one scheme.

    With `p` and `q` the key (or, for the exponent schemes, the modulus
    ``N = pq``) is fixed; `shares` and `aggregator_share` then override the
    dealer, and `hash_stub` replaces the round base.
    For ``pwsah*``, `gamma`, `delta` and `slots` (key ``m``) fix the packing
    layout instead of the bit budget.
    """

    scheme: str = "pwsah"
    weights: tuple = ()
    inputs: tuple = ()
    kappa: int = 256
    p: int | None = None
    q: int | None = None
    l_i: int = 16
    l_f: int = 0
    lam: int = dataclasses.field(default=16, metadata={"key": "lambda"})
    shares: tuple | None = None
    aggregator_share: int | None = None
    hash_stub: int | None = None
    gamma: int | None = None
    delta: int | None = None
    slots: int | None = dataclasses.field(default=None, metadata={"key": "m"})
    t: int = 0
    seed: str = "privagg"

    def __post_init__(self) -> None:
        if self.scheme not in SCHEMES:
            msg = f"scheme must be one of {SCHEMES}, got '{self.scheme}'"
            raise ValueError(msg)
        if not self.weights or len(self.weights) != len(self.inputs):
            msg = "weights and inputs need one entry per agent"
            raise ValueError(msg)
        if (self.p is None) != (self.q is None):
            msg = "p and q must be given together"
            raise ValueError(msg)
        if (self.shares is None) != (self.aggregator_share is None):
            msg = "shares and aggregator_share must be given together"
            raise ValueError(msg)
        layout = (self.gamma, self.delta, self.slots)
        if any(v is not None for v in layout):
            if None in layout:
                msg = "gamma, delta and m must be given together"
                raise ValueError(msg)
            if self.scheme != "pwsah*":
                msg = "an explicit packing layout needs scheme pwsah*"
                raise ValueError(msg)

    @property
    def M(self) -> int:
        return len(self.weights)

    @property
    def l(self) -> int:  # noqa: E743
        return self.l_i + self.l_f


def load_case_study(path: str | Path) -> CaseStudyConfig:
    raw = read_config(path)
    log.debug(f"case study config {path}: {raw}")
    return _build(CaseStudyConfig, raw, str(path))


def load_scheme_run(path: str | Path) -> SchemeRunConfig:
    return _build(SchemeRunConfig, read_config(path), str(path))
