"""Message and operation accounting for simulated runs."""

from __future__ import annotations

import logging
import time
from collections.abc import Iterator
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path

import pandas as pd

from ..crypto import OpCounter

log = logging.getLogger(__name__)

TRACE_COLUMNS = [
    "round",
    "sender",
    "recipient",
    "bytes",
    "exps",
    "mults",
    "encs",
    "decs",
    "wall_ns",
]


@dataclass(frozen=True)
class MessageRecord:
    round: int
    sender: int
    recipient: int
    kind: str
    bytes: int


@dataclass(frozen=True)
class HandlerRecord:
    round: int
    participant: int
    ops: OpCounter
    wall_ns: int
    phase: str


@dataclass
class SimTrace:
    """Per-round message log and per-participant operation tallies.

    Message records and handler records are kept apart: the first carry byte
    counts, the second operation counts and wall time of one
    ``step`` invocation.
    """

    messages: list[MessageRecord] = field(default_factory=list)
    handlers: list[HandlerRecord] = field(default_factory=list)
    phase_wall_ns: dict[str, int] = field(default_factory=dict)

    def extend(self, other: SimTrace) -> SimTrace:
        self.messages.extend(other.messages)
        self.handlers.extend(other.handlers)
        for k, v in other.phase_wall_ns.items():
            self.phase_wall_ns[k] = self.phase_wall_ns.get(k, 0) + v
        return self

    @contextmanager
    def phase(self, name: str) -> Iterator[None]:
        """Accumulate the wall time of the block under `name`."""
        start = time.perf_counter_ns()
        try:
            yield
        finally:
            elapsed = time.perf_counter_ns() - start
            self.phase_wall_ns[name] = self.phase_wall_ns.get(name, 0) + elapsed

    @property
    def total_bytes(self) -> int:
        return sum(m.bytes for m in self.messages)

    @property
    def rounds(self) -> int:
        """Number of distinct rounds in which some participant ran."""
        return len({h.round for h in self.handlers})

    def bytes_by_kind(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for m in self.messages:
            out[m.kind] = out.get(m.kind, 0) + m.bytes
        return out

    def counters(self, phase: str | None = None) -> dict[int, OpCounter]:
        """Summed operation counts per participant."""
        out: dict[int, OpCounter] = {}
        for h in self.handlers:
            if phase is not None and h.phase != phase:
                continue
            out.setdefault(h.participant, OpCounter())
            out[h.participant] += h.ops
        return out

    def wall_ns(self, phase: str | None = None) -> dict[int, int]:
        out: dict[int, int] = {}
        for h in self.handlers:
            if phase is None or h.phase == phase:
                out[h.participant] = out.get(h.participant, 0) + h.wall_ns
        return out

    def relabel(self, mapping: dict[int, int]) -> SimTrace:
        """Copy with participant ids replaced through `mapping`."""
        return SimTrace(
            [
                MessageRecord(
                    m.round, mapping[m.sender], mapping[m.recipient], m.kind, m.bytes
                )
                for m in self.messages
            ],
            [
                HandlerRecord(
                    h.round, mapping[h.participant], h.ops, h.wall_ns, h.phase
                )
                for h in self.handlers
            ],
            dict(self.phase_wall_ns),
        )

    def fingerprint(self) -> tuple:
        """Everything except wall times, for determinism checks."""
        return (
            tuple(self.messages),
            tuple(
                (h.round, h.participant, h.phase, tuple(h.ops.asdict().items()))
                for h in self.handlers
            ),
        )

    def to_dataframe(self) -> pd.DataFrame:
        """Flatten into the trace table.

        Message rows carry `bytes` and zero counts; handler rows carry
        ``recipient = -1``, zero bytes, the operation counts and `wall_ns`.
        """
        rows = [
            (m.round, m.sender, m.recipient, m.bytes, 0, 0, 0, 0, 0)
            for m in self.messages
        ]
        rows += [
            (
                h.round,
                h.participant,
                -1,
                0,
                h.ops.exps,
                h.ops.mults,
                h.ops.encs,
                h.ops.decs,
                h.wall_ns,
            )
            for h in self.handlers
        ]
        df = pd.DataFrame(rows, columns=TRACE_COLUMNS)
        df = df.sort_values(["round", "sender", "recipient"], kind="stable")
        return df.reset_index(drop=True)

    def to_csv(self, path: str | Path | None = None) -> str | None:
        return self.to_dataframe().to_csv(path, index=False)
