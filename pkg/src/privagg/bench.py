"""Benchmarks comparing the naive and the packed weight-hiding scheme.

Four sweeps are available:

``edge-prob``
    the encrypted control case study on Erdős–Rényi networks of growing
    edge probability.
``input-dim``
    one aggregation group of fixed size, growing input and output
    dimension.
``communication``
    payload of one contribution at full key size.
``budget``
    slot layouts for a grid of fixed-point widths, dimensions and network
    sizes; no cryptography involved.

Every row holds the predicted and the measured operation counts of all
contributions of one time step, which must agree exactly. Wall times are
informative only.
"""

from __future__ import annotations

import dataclasses
import functools
import logging
import time
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import pandas as pd

from .control import CaseStudyConfig, run_case_study
from .crypto import PaillierKeyPair
from .encoding import bit_budget
from .exceptions import OracleMismatchError
from .numeric import RandomSource
from .schemes import AggregationScheme, predict_costs, simulate
from .schemes.costs import reduction
from .schemes.packed import PWSAhPacked
from .schemes.pwsah import PWSAh
from .simnet import AGGREGATOR, SimTrace
from .utils import ceil_div

log = logging.getLogger(__name__)

BENCH_HEADER = "# privagg-bench v1"
SWEEPS = ("edge-prob", "input-dim", "communication", "budget")
BENCH_SCHEMES = ("pwsah", "pwsah*")

ROW_COLUMNS = [
    "sweep",
    "scheme",
    "share_mode",
    "M",
    "group_size",
    "n_i",
    "n_a",
    "edge_prob",
    "kappa",
    "m",
    "online_ns_avg",
    "online_ns_min",
    "online_ns_max",
    "offline_ns",
    "bytes_per_step",
    "payload_per_contribution",
    "ciphertexts_predicted",
    "ciphertexts_sent",
    "exps_predicted",
    "exps_measured",
    "adds_predicted",
    "adds_measured",
    "reduction_exps",
    "reduction_ciphertexts",
    "reduction_online_max",
]
BUDGET_COLUMNS = ["sweep", "l", "lambda", "n", "M", "bits", "gamma", "delta", "m"]
WALL_COLUMNS = ["online_ns_avg", "online_ns_min", "online_ns_max", "offline_ns"]

# reduction column -> measured column it compares
_REDUCTIONS = {
    "reduction_exps": "exps_measured",
    "reduction_ciphertexts": "ciphertexts_sent",
    "reduction_online_max": "online_ns_max",
}
_MATCH_KEY = ("sweep", "share_mode", "M", "group_size", "n_i", "n_a", "edge_prob")


@dataclass(frozen=True)
class BenchmarkReport:
    """Rows of one sweep, written as CSV under a versioned header line."""

    sweep: str
    table: pd.DataFrame = field(repr=False)

    @property
    def counts_match(self) -> bool:
        """Whether every measured count equals its prediction."""
        if "exps_measured" not in self.table:
            return True
        t = self.table
        return bool(
            (t["exps_predicted"] == t["exps_measured"]).all()
            and (t["adds_predicted"] == t["adds_measured"]).all()
            and (t["ciphertexts_predicted"] == t["ciphertexts_sent"]).all()
        )

    def without_wall_times(self) -> pd.DataFrame:
        return self.table.drop(columns=WALL_COLUMNS, errors="ignore")

    def to_csv(self, path: str | Path | None = None) -> str | None:
        text = f"{BENCH_HEADER}\n" + self.table.to_csv(index=False)
        if path is None:
            return text
        Path(path).write_text(text, encoding="utf-8")
        return None


def _map(fn: Callable, items: Sequence, jobs: int = 1) -> list:
    """`fn` over `items`, in item order whatever the number of workers."""
    if jobs <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _wall_stats(trace: SimTrace) -> dict[str, int]:
    walls = [w for pid, w in trace.wall_ns("online").items() if pid != AGGREGATOR]
    return {
        "online_ns_avg": sum(walls) // len(walls),
        "online_ns_min": min(walls),
        "online_ns_max": max(walls),
    }


def add_reductions(rows: list[dict[str, Any]]) -> list[dict[str, Any]]:
    """Fill ``1 − packed/naive`` on packed rows from the matching naive row."""
    naive = {
        tuple(r[k] for k in _MATCH_KEY): r for r in rows if r["scheme"] == "pwsah"
    }
    for r in rows:
        base = None
        if r["scheme"] == "pwsah*":
            base = naive.get(tuple(r[k] for k in _MATCH_KEY))
        for col, src in _REDUCTIONS.items():
            r[col] = None if base is None else reduction(base[src], r[src])
    return rows


def _report(sweep: str, rows: list[dict[str, Any]]) -> BenchmarkReport:
    table = pd.DataFrame(add_reductions(rows), columns=ROW_COLUMNS)
    return BenchmarkReport(sweep, table)


@functools.cache
def bench_keypair(kappa: int, seed: str) -> PaillierKeyPair:
    """One key per size and seed, shared by the naive and packed rows."""
    return PaillierKeyPair.generate(
        kappa, RandomSource.deterministic(seed).spawn(f"key/{kappa}")
    )


def _signed(rng: RandomSource, l: int) -> int:  # noqa: E741
    half = 1 << (l - 1)
    return rng.randrange(-half, half)


def _star_instance(
    scheme_id: str,
    weights: list,
    rng: RandomSource,
    keypair: PaillierKeyPair,
    l: int,  # noqa: E741
    lam: int,
) -> AggregationScheme:
    if scheme_id == "pwsah":
        return PWSAh.setup(weights, rng, T=1, keypair=keypair, l=l, lam=lam)
    return PWSAhPacked.setup(
        weights, rng, T=1, keypair=keypair, l_i=l, l_f=0, lam=lam
    )


def star_row(
    scheme_id: str,
    group_size: int,
    n_i: int,
    n_a: int,
    kappa: int = 2048,
    l: int = 32,  # noqa: E741
    lam: int = 80,
    seed: str = "privagg",
    M: int | None = None,
    sweep: str = "input-dim",
) -> dict[str, Any]:
    """Benchmark one aggregation of `group_size` agents.

    Weights and inputs are uniform `l`-bit integers. `M` is only recorded,
    for groups cut out of a larger network.

    Raises
    ------
    OracleMismatchError
        if the decrypted aggregate differs from the plaintext sum.
    """
    keypair = bench_keypair(kappa, seed)
    rng = RandomSource.deterministic(seed).spawn(f"{sweep}/{group_size}/{n_i}/{n_a}")
    wrng = rng.spawn("weights")
    weights = [
        [[_signed(wrng, l) for _ in range(n_i)] for _ in range(n_a)]
        for _ in range(group_size)
    ]
    xrng = rng.spawn("inputs")
    xs = [[_signed(xrng, l) for _ in range(n_i)] for _ in range(group_size)]

    start = time.perf_counter_ns()
    inst = _star_instance(scheme_id, weights, rng.spawn(scheme_id), keypair, l, lam)
    offline = time.perf_counter_ns() - start

    res = simulate(inst, xs, t=0, rng=rng.spawn(f"run/{scheme_id}"))
    if not res.matches:
        msg = f"aggregate {res.aggregate} differs from {res.oracle}"
        raise OracleMismatchError(msg, scheme_id, 0)

    m = inst.params.m if isinstance(inst, PWSAhPacked) else 1
    pred = predict_costs(scheme_id, group_size, n_i, n_a, m=m, l=l, lam=lam)
    ops = [c for pid, c in res.trace.counters("online").items() if pid != AGGREGATOR]
    return {
        "sweep": sweep,
        "scheme": scheme_id,
        "share_mode": "dealer",
        "M": group_size if M is None else M,
        "group_size": group_size,
        "n_i": n_i,
        "n_a": n_a,
        "edge_prob": None,
        "kappa": kappa,
        "m": m,
        **_wall_stats(res.trace),
        "offline_ns": offline,
        "bytes_per_step": res.trace.total_bytes,
        "payload_per_contribution": res.payload_bytes // group_size,
        "ciphertexts_predicted": pred.ciphertexts_sent * group_size,
        "ciphertexts_sent": sum(c.count for c in res.contributions),
        "exps_predicted": pred.exps * group_size,
        "exps_measured": sum(c.exps for c in ops),
        "adds_predicted": pred.cipher_adds * group_size,
        "adds_measured": sum(c.mults for c in ops),
    }


def case_study_row(config: CaseStudyConfig, sweep: str = "edge-prob") -> dict[str, Any]:
    """Benchmark the encrypted control loop of `config`.

    Counts cover the contributions of all ``horizon`` steps; byte and
    ciphertext columns are per step.

    Raises
    ------
    OracleMismatchError
        if the encrypted trajectory leaves the plaintext one.
    """
    res = run_case_study(config)
    if not res.trajectories.exact:
        t, agent = res.trajectories.first_mismatch()
        msg = f"trajectory of agent {agent} differs from the oracle"
        raise OracleMismatchError(msg, config.scheme, t)

    exps = adds = sent = 0
    for i, group in res.groups.items():
        pred = predict_costs(
            config.scheme,
            len(group),
            config.n,
            config.m_dim,
            m=res.slots[i],
            l=config.l,
            lam=config.lam,
        )
        exps += pred.exps * len(group)
        adds += pred.cipher_adds * len(group)
        sent += pred.ciphertexts_sent * (len(group) - 1)

    # odd rounds hold the contributions, even rounds the aggregations
    contrib = [h.ops for h in res.trace.handlers if h.round % 2 == 1]
    on_wire = sum(c for (j, i), c in res.ciphertexts_sent.items() if j != i)
    mean_group = sum(len(g) for g in res.groups.values()) / len(res.groups)
    return {
        "sweep": sweep,
        "scheme": config.scheme,
        "share_mode": config.share_mode,
        "M": config.M,
        "group_size": mean_group,
        "n_i": config.n,
        "n_a": config.m_dim,
        "edge_prob": config.edge_prob,
        "kappa": config.kappa,
        "m": min(res.slots.values()),
        **_wall_stats(res.trace),
        "offline_ns": res.offline_trace.phase_wall_ns.get("offline", 0),
        "bytes_per_step": res.trace.total_bytes // config.horizon,
        "payload_per_contribution": ceil_div(config.kappa, 8)
        * max(res.ciphertexts_sent.values()),
        "ciphertexts_predicted": sent,
        "ciphertexts_sent": on_wire,
        "exps_predicted": exps * config.horizon,
        "exps_measured": sum(c.exps for c in contrib),
        "adds_predicted": adds * config.horizon,
        "adds_measured": sum(c.mults for c in contrib),
    }


def sweep_edge_prob(
    base: CaseStudyConfig,
    probs: Iterable[float] = (0.2, 0.4, 0.6, 0.8, 1.0),
    schemes: Iterable[str] = BENCH_SCHEMES,
    jobs: int = 1,
) -> BenchmarkReport:
    """Case study runtime and traffic against the edge probability."""
    configs = [
        dataclasses.replace(base, edge_prob=p, scheme=s) for p in probs for s in schemes
    ]
    log.info(f"edge-prob sweep over {len(configs)} configuration(s)")
    return _report("edge-prob", _map(case_study_row, configs, jobs))


def sweep_input_dim(
    M: int = 25,
    deg: int = 10,
    dims: Iterable[int] = range(2, 11),
    kappa: int = 2048,
    l: int = 32,  # noqa: E741
    lam: int = 80,
    seed: str = "privagg",
    schemes: Iterable[str] = BENCH_SCHEMES,
    jobs: int = 1,
) -> BenchmarkReport:
    """One neighborhood (an agent of degree `deg` in a network of `M`)
    with ``n_i = n_a`` ranging over `dims`."""
    if not 0 <= deg < M:
        msg = f"degree {deg} impossible in a network of {M} agents"
        raise ValueError(msg)
    items = [(s, d) for d in dims for s in schemes]
    log.info(f"input-dim sweep over {len(items)} configuration(s)")

    def row(item: tuple[str, int]) -> dict[str, Any]:
        s, d = item
        return star_row(s, deg + 1, d, d, kappa, l, lam, seed, M=M, sweep="input-dim")

    return _report("input-dim", _map(row, items, jobs))


def sweep_communication(
    M: int = 2,
    n: int = 6,
    kappa: int = 2048,
    l: int = 32,  # noqa: E741
    lam: int = 80,
    seed: str = "privagg",
    schemes: Iterable[str] = BENCH_SCHEMES,
) -> BenchmarkReport:
    """Payload of a contribution with ``n_i = n_a = n``."""
    rows = [
        star_row(s, M, n, n, kappa, l, lam, seed, sweep="communication")
        for s in schemes
    ]
    return _report("communication", rows)


def sweep_budget(
    ls: Iterable[int] = (8, 16, 24, 32),
    ns: Iterable[int] = range(1, 11),
    Ms: Iterable[int] = (10, 25, 50),
    lam: int = 80,
    bits: int = 2048,
) -> BenchmarkReport:
    """Slots per ciphertext over a grid of widths and dimensions."""
    rows = []
    for l in ls:  # noqa: E741
        for n in ns:
            for M in Ms:
                b = bit_budget(l, lam, n, M, bits)
                rows.append(("budget", l, lam, n, M, bits, b.gamma, b.delta, b.m))
    return BenchmarkReport("budget", pd.DataFrame(rows, columns=BUDGET_COLUMNS))
