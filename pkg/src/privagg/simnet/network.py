"""Communication topologies."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import networkx as nx

from .. import settings
from ..exceptions import ProtocolError
from ..numeric import RandomSource

log = logging.getLogger(__name__)

AGGREGATOR = 0


@dataclass(frozen=True)
class Topology:
    """Undirected agent graph on ``1..M``.

    The aggregator (participant ``0``) is linked to every agent on top of
    the agent edges.
    """

    M: int
    edges: frozenset[tuple[int, int]]
    edge_probability: float | None = None

    def __post_init__(self) -> None:
        for a, b in self.edges:
            if not (1 <= a <= self.M and 1 <= b <= self.M) or a == b:
                msg = f"invalid agent edge ({a}, {b}) for M={self.M}"
                raise ValueError(msg)

    @classmethod
    def from_graph(cls, graph: nx.Graph, edge_probability: float | None = None):
        edges = frozenset((min(a, b), max(a, b)) for a, b in graph.edges)
        return cls(graph.number_of_nodes(), edges, edge_probability)

    @classmethod
    def from_edges(cls, M: int, edges) -> Topology:
        return cls(M, frozenset((min(a, b), max(a, b)) for a, b in edges))

    @classmethod
    def complete(cls, M: int) -> Topology:
        return cls.from_graph(
            nx.relabel_nodes(nx.complete_graph(M), lambda v: v + 1), 1.0
        )

    @classmethod
    def empty(cls, M: int) -> Topology:
        return cls(M, frozenset())

    def agent_graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(1, self.M + 1))
        g.add_edges_from(self.edges)
        return g

    def graph(self) -> nx.Graph:
        """The agent graph plus the aggregator star."""
        g = self.agent_graph()
        g.add_edges_from((AGGREGATOR, i) for i in range(1, self.M + 1))
        return g

    def neighbors(self, i: int) -> list[int]:
        """Agent neighbors of agent `i`, sorted."""
        return sorted(self.agent_graph().neighbors(i))

    def is_connected(self) -> bool:
        return self.M == 1 or nx.is_connected(self.agent_graph())

    def degrees(self) -> tuple[int, float, int]:
        """Minimum, average and maximum agent degree."""
        deg = [d for _, d in self.agent_graph().degree]
        return min(deg), sum(deg) / len(deg), max(deg)


def gen_topology(
    M: int,
    edge_probability: float,
    rng: RandomSource,
    require_connected: bool = True,
) -> Topology:
    """Sample an Erdős–Rényi agent graph.

    Disconnected samples are discarded and redrawn at most
    ``DEFAULT_SETTINGS["topology_retries"]`` times when `require_connected`.

    Examples
    --------
    >>> t = gen_topology(5, 1.0, RandomSource.deterministic(1))
    >>> t.degrees()
    (4, 4.0, 4)
    """
    if not 0 <= edge_probability <= 1:
        msg = f"edge probability {edge_probability} outside [0, 1]"
        raise ValueError(msg)

    retries = settings.DEFAULT_SETTINGS["topology_retries"]
    for attempt in range(retries):
        g = nx.gnp_random_graph(M, edge_probability, seed=rng.randbits(63))
        topo = Topology.from_graph(
            nx.relabel_nodes(g, lambda v: v + 1), edge_probability
        )
        if not require_connected or topo.is_connected():
            log.debug(
                f"sampled G({M}, {edge_probability}) with degrees {topo.degrees()}"
            )
            return topo
        log.debug(f"attempt {attempt}: disconnected sample, resampling")

    msg = f"no connected G({M}, {edge_probability}) sample in {retries} attempts"
    raise ProtocolError(msg)
