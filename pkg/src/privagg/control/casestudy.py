"""Encrypted distributed control.

Every agent is the aggregator of its own control input
``u_i = Σ_{j ∈ N_i ∪ {i}} K_ij x_j``: its neighbors encrypt their states
against the encrypted gains ``K_ij`` and send one contribution each, agent
``i`` adds its own and decrypts. Each agent owns a separate Paillier key.

States and inputs are re-quantized to ``l_f`` fractional bits after every
product, in the encrypted run and in :func:`plaintext_oracle` alike, so
the two trajectories agree bit for bit.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import networkx as nx
import numpy as np
import pandas as pd

from ..crypto import PaillierKeyPair
from ..encoding import round_half_away
from ..exceptions import OverflowGuardError
from ..numeric import RandomSource
from ..schemes import Contribution, weighted_sum
from ..schemes.base import AggregationScheme, matvec
from ..schemes.packed import PWSAhPacked
from ..schemes.pwsah import PWSAh
from ..simnet import Message, Network, Participant, SimTrace, Topology, gen_topology
from ..zeroshares import (
    PairwiseKeyring,
    ShareRange,
    one_round_decentralized,
    two_round_relay,
)
from .config import CaseStudyConfig
from .plant import AgentPlant, generate_plants

log = logging.getLogger(__name__)

TRAJECTORY_COLUMNS = ["t", "agent", "component", "encrypted_raw", "oracle_raw"]

States = dict[int, tuple[int, ...]]


@dataclass
class Trajectory:
    """Raw fixed-point states (``horizon + 1`` steps) and inputs."""

    states: list[States] = field(default_factory=list)
    inputs: list[States] = field(default_factory=list)


@dataclass(frozen=True)
class TrajectoryPair:
    encrypted: Trajectory
    oracle: Trajectory

    def first_mismatch(self) -> tuple[int, int] | None:
        """``(t, agent)`` of the first difference, or ``None``."""
        for name in ("inputs", "states"):
            enc = getattr(self.encrypted, name)
            ora = getattr(self.oracle, name)
            for t, (a, b) in enumerate(zip(enc, ora, strict=True)):
                for i in sorted(a):
                    if a[i] != b[i]:
                        return t, i
        return None

    @property
    def exact(self) -> bool:
        return self.first_mismatch() is None

    def to_dataframe(self) -> pd.DataFrame:
        rows = [
            (t, i, k, v, self.oracle.states[t][i][k])
            for t, states in enumerate(self.encrypted.states)
            for i in sorted(states)
            for k, v in enumerate(states[i])
        ]
        return pd.DataFrame(rows, columns=TRAJECTORY_COLUMNS)

    def to_csv(self, path: str | Path | None = None) -> str | None:
        return self.to_dataframe().to_csv(path, index=False)


@dataclass(frozen=True)
class CaseStudyResult:
    trajectories: TrajectoryPair
    trace: SimTrace = field(repr=False)
    offline_trace: SimTrace = field(repr=False)
    topology: Topology
    plants: Mapping[int, AgentPlant] = field(repr=False)
    ciphertexts_sent: Mapping[tuple[int, int], int] = field(default_factory=dict)
    """Payload elements per contribution, keyed by ``(sender, aggregator)``."""
    groups: Mapping[int, tuple[int, ...]] = field(default_factory=dict)
    """Agents contributing to each aggregator, the aggregator included."""
    slots: Mapping[int, int] = field(default_factory=dict)
    """Output rows per ciphertext at each aggregator."""


def requantize(raw: int, l_f: int) -> int:
    """Drop `l_f` fractional bits, rounding half away from zero."""
    return round_half_away(Fraction(raw, 1 << l_f))


def _guard(
    values: Sequence[int],
    l: int,  # noqa: E741
    agent: int,
    t: int,
    what: str,
) -> None:
    half = 1 << (l - 1)
    for v in values:
        if not -half <= v < half:
            msg = f"{what} {v} leaves the {l}-bit fixed-point range"
            raise OverflowGuardError(msg, agent, t)


def control_inputs(plant: AgentPlant, states: States) -> tuple[int, ...]:
    """``Σ_j K_ij x_j`` at scale ``2^(2 l_f)``."""
    group = sorted(plant.gains)
    weights = [plant.gains[j] for j in group]
    return tuple(weighted_sum(weights, [states[j] for j in group]))


def advance(
    plant: AgentPlant,
    x: Sequence[int],
    u: Sequence[int],
    config: CaseStudyConfig,
    agent: int,
    t: int,
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Re-quantize ``u`` and compute ``A x + B u``.

    Returns
    -------
    the re-quantized input and the next state.

    Raises
    ------
    OverflowGuardError
        if either leaves the ``l``-bit range.
    """
    u_q = tuple(requantize(v, config.l_f) for v in u)
    _guard(u_q, config.l, agent, t, "input")
    ax = matvec(plant.A, x)
    bu = matvec(plant.B, u_q)
    x_next = tuple(requantize(a + b, config.l_f) for a, b in zip(ax, bu, strict=True))
    _guard(x_next, config.l, agent, t + 1, "state")
    return u_q, x_next


def build_network(config: CaseStudyConfig) -> tuple[Topology, dict[int, AgentPlant]]:
    """Topology and plants derived from ``config.seed``."""
    rng = RandomSource.deterministic(config.seed)
    topology = gen_topology(
        config.M, config.edge_prob, rng.spawn("topology"), require_connected=False
    )
    plants = generate_plants(
        topology,
        config.n,
        config.m_dim,
        config.l_f,
        rng.spawn("plants"),
        config.coupling,
    )
    return topology, plants


def _initial(config: CaseStudyConfig, plants: Mapping[int, AgentPlant]) -> States:
    x0 = {i: p.x0 for i, p in plants.items()}
    for i, x in x0.items():
        _guard(x, config.l, i, 0, "state")
    return x0


def plaintext_oracle(
    config: CaseStudyConfig,
    topology: Topology | None = None,
    plants: Mapping[int, AgentPlant] | None = None,
) -> Trajectory:
    """Fixed-point closed loop without cryptography."""
    if plants is None:
        topology, plants = build_network(config)
    traj = Trajectory([_initial(config, plants)])
    for t in range(config.horizon):
        states = traj.states[t]
        inputs: States = {}
        nxt: States = {}
        for i in sorted(plants):
            inputs[i], nxt[i] = advance(
                plants[i], states[i], control_inputs(plants[i], states), config, i, t
            )
        traj.inputs.append(inputs)
        traj.states.append(nxt)
    return traj


def float_reference(
    config: CaseStudyConfig, plants: Mapping[int, AgentPlant]
) -> list[dict[int, np.ndarray]]:
    """Double-precision closed loop on the quantized coefficients."""
    scale = float(1 << config.l_f)
    mats = {i: p.as_float(config.l_f) for i, p in plants.items()}
    states = [{i: np.array(p.x0, dtype=float) / scale for i, p in plants.items()}]
    for _ in range(config.horizon):
        cur = states[-1]
        nxt = {}
        for i, (A, B, gains) in mats.items():
            u = sum(K @ cur[j] for j, K in gains.items())
            nxt[i] = A @ cur[i] + B @ u
        states.append(nxt)
    return states


class _ControlAgent(Participant):
    def __init__(self, pid: int, run: _EncryptedRun) -> None:
        super().__init__(pid)
        self.run = run

    def step(self, round_no: int, inbox: list[Message]) -> list[Message]:
        if round_no % 2 == 1:
            return self.run.contribute(self.pid)
        self.run.aggregate(self.pid, inbox)
        return []


class _EncryptedRun:
    """Per-agent scheme instances and the state of the current step."""

    def __init__(
        self,
        config: CaseStudyConfig,
        plants: Mapping[int, AgentPlant],
        rng: RandomSource,
    ) -> None:
        self.config = config
        self.plants = plants
        self.rng = rng
        self.groups = {i: sorted(p.gains) for i, p in plants.items()}
        for i, group in self.groups.items():
            if i not in group:
                msg = f"agent {i} has no gain on its own state"
                raise ValueError(msg)
        self.local = {
            i: {j: k for k, j in enumerate(group, 1)}
            for i, group in self.groups.items()
        }
        self.targets = {
            j: [i for i in sorted(self.groups) if j in self.groups[i]] for j in plants
        }
        self.offline = SimTrace()
        self.sent: dict[tuple[int, int], int] = {}
        self.own: dict[int, Contribution] = {}
        self.inputs: States = {}
        self.states: States = {}
        self.t = 0

        with self.offline.phase("offline"):
            self.instances = {i: self._setup(i) for i in sorted(plants)}
            self.keyrings = {
                i: PairwiseKeyring.provision(
                    range(len(group) + 1), rng.spawn(f"keyring/{i}")
                )
                for i, group in self.groups.items()
            }

    @property
    def packed(self) -> bool:
        return self.config.scheme == "pwsah*"

    def slots(self) -> dict[int, int]:
        return {
            i: inst.params.m if self.packed else 1
            for i, inst in self.instances.items()
        }

    def _setup(self, i: int) -> AggregationScheme:
        cfg = self.config
        weights = [self.plants[i].gains[j] for j in self.groups[i]]
        keypair = PaillierKeyPair.generate(cfg.kappa, self.rng.spawn(f"key/{i}"))
        T = cfg.horizon if cfg.share_mode == "dealer" else 0
        rng = self.rng.spawn(f"setup/{i}")
        if self.packed:
            return PWSAhPacked.setup(
                weights,
                rng,
                T=T,
                keypair=keypair,
                l_i=cfg.l_i,
                l_f=cfg.l_f,
                lam=cfg.lam,
            )
        return PWSAh.setup(
            weights, rng, T=T, keypair=keypair, l=cfg.l, lam=cfg.lam, l_f=cfg.l_f
        )

    def _group_graph(self, i: int, topology: Topology) -> nx.Graph:
        """Aggregator ``i`` as node 0, its group as ``1..|G|``."""
        local = self.local[i]
        g = nx.Graph()
        g.add_edges_from((0, k) for k in local.values())
        g.add_edges_from(
            (local[a], local[b])
            for a, b in topology.edges
            if a in local and b in local
        )
        return g

    def provision(self, t: int, topology: Topology) -> None:
        """Run the decentralized share protocol of every group for step `t`."""
        mode = self.config.share_mode
        if mode == "dealer":
            return
        for i in sorted(self.instances):
            inst = self.instances[i]
            if self.packed:
                srange = ShareRange.mod_q(1 << inst.params.gamma)
            else:
                srange = ShareRange.mod_q(inst.N)
            rng = self.rng.spawn(f"shares/{t}/{i}")
            graph = self._group_graph(i, topology)
            if mode == "one-round":
                res = one_round_decentralized(graph, t, rng, srange, dim=inst.n_a)
            else:
                res = two_round_relay(
                    graph,
                    t,
                    self.keyrings[i],
                    rng,
                    srange,
                    dim=inst.n_a,
                    require_units=not self.packed and inst.is_scalar,
                )
            self.instances[i] = inst.with_shares(t, res.rows())
            mapping = {0: i} | {k: j for j, k in self.local[i].items()}
            self.offline.extend(res.trace.relabel(mapping))

    def contribute(self, j: int) -> list[Message]:
        out = []
        for i in self.targets[j]:
            inst = self.instances[i]
            rng = self.rng.spawn(f"enc/{self.t}/{i}/{j}")
            c = inst.enc(self.local[i][j], self.states[j], self.t, rng)
            self.sent[(j, i)] = c.count
            if i == j:
                self.own[i] = c
            else:
                out.append(Message(j, i, c.kind, c.to_bytes()))
        return out

    def aggregate(self, i: int, inbox: list[Message]) -> None:
        inst = self.instances[i]
        contributions = [self.own[i]] + [
            Contribution.from_bytes(
                m.payload, self.local[i][m.sender], self.t, m.kind, inst.N
            )
            for m in inbox
        ]
        u = inst.aggr_dec(contributions, self.t)
        self.inputs[i] = (u,) if isinstance(u, int) else tuple(u)


def run_case_study(
    config: CaseStudyConfig,
    topology: Topology | None = None,
    plants: Mapping[int, AgentPlant] | None = None,
) -> CaseStudyResult:
    """Run the encrypted closed loop and its plaintext oracle.

    Parameters
    ----------
    config
        experiment parameters; `seed` drives every random choice.
    topology, plants
        override the seeded network, e.g. for hand-made plants.

    Raises
    ------
    OverflowGuardError
        if a state or input leaves the fixed-point range, naming the agent
        and step.
    """
    if topology is None or plants is None:
        built_topology, built_plants = build_network(config)
        topology = built_topology if topology is None else topology
        plants = built_plants if plants is None else plants

    log.info(
        f"case study: M={config.M}, n={config.n}, m={config.m_dim}, "
        f"{config.scheme}, {config.share_mode} shares, horizon {config.horizon}"
    )
    rng = RandomSource.deterministic(config.seed).spawn("run")
    run = _EncryptedRun(config, plants, rng)
    net = Network([_ControlAgent(i, run) for i in sorted(plants)], topology)

    traj = Trajectory([_initial(config, plants)])
    for t in range(config.horizon):
        run.t = t
        run.states = traj.states[t]
        with run.offline.phase("offline"):
            run.provision(t, topology)
        net.run(2, phase="online")

        inputs: States = {}
        nxt: States = {}
        for i in sorted(plants):
            inputs[i], nxt[i] = advance(
                plants[i], run.states[i], run.inputs[i], config, i, t
            )
        traj.inputs.append(inputs)
        traj.states.append(nxt)
        log.debug(f"step {t} done")

    pair = TrajectoryPair(traj, plaintext_oracle(config, topology, plants))
    return CaseStudyResult(
        pair,
        net.trace,
        run.offline,
        topology,
        plants,
        dict(run.sent),
        {i: tuple(g) for i, g in run.groups.items()},
        run.slots(),
    )
