"""Deterministic round-based protocol simulator.

Participant ``0`` is the aggregator and is linked to every agent ``1..M``.
Agent links come from a :class:`.Topology`.
"""

from __future__ import annotations

from .network import AGGREGATOR, Topology, gen_topology
from .scheduler import Message, Network, Participant, run_round
from .trace import TRACE_COLUMNS, HandlerRecord, MessageRecord, SimTrace

__all__ = [
    "AGGREGATOR",
    "TRACE_COLUMNS",
    "HandlerRecord",
    "Message",
    "MessageRecord",
    "Network",
    "Participant",
    "SimTrace",
    "Topology",
    "gen_topology",
    "run_round",
]
