"""privagg's command line interface."""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from collections.abc import Callable, Iterator
from contextlib import contextmanager
from pathlib import Path

from . import __version__, bench
from . import logging as plogging
from .control import (
    SCHEMES,
    SHARE_MODES,
    CaseStudyConfig,
    SchemeRunConfig,
    load_case_study,
    load_scheme_run,
    run_case_study,
)
from .crypto import PaillierKeyPair
from .encoding import EncodingParams, bit_budget, bit_budget_psa
from .exceptions import ConfigError, OracleMismatchError, OverflowGuardError
from .numeric import RandomSource
from .schemes import AggregationScheme, HashSpec, predict_costs, simulate, transcript
from .schemes.base import as_matrix
from .schemes.packed import PWSAhPacked
from .schemes.psa import PSA1, PSA2
from .schemes.pwsac import PWSAc
from .schemes.pwsah import PWSAh
from .zeroshares import WeightedShareSet, ZeroShareSet

log = logging.getLogger(__name__)

_COMMAND_LINE = "<command line>"


@contextmanager
def _config_errors(source: str | None) -> Iterator[None]:
    """Report parameters rejected by the library as a `ConfigError`."""
    try:
        yield
    except ValueError as e:
        raise ConfigError(str(e), source or _COMMAND_LINE) from e


def scheme_from_config(cfg: SchemeRunConfig) -> AggregationScheme:
    """Set up the scheme instance described by `cfg`.

    For ``psa1`` the ``kappa`` key is the bit length of ``Q``. Explicit
    `shares` replace the dealt ones at step ``cfg.t`` and are only accepted
    for a single output row.

    Raises
    ------
    ValueError
        on inconsistent parameters.
    """
    rng = RandomSource.deterministic(cfg.seed)
    N = None if cfg.p is None else cfg.p * cfg.q
    keypair = None if cfg.p is None else PaillierKeyPair.from_primes(cfg.p, cfg.q)
    hash_spec = None
    if cfg.hash_stub is not None:
        if N is None:
            msg = "hash_stub requires p and q"
            raise ValueError(msg)
        hash_spec = HashSpec.stubbed(N, cfg.hash_stub)

    T = cfg.t + 1
    if cfg.scheme == "psa1":
        inst = PSA1.setup(cfg.weights, cfg.l, rng, T=T, Q=1 << cfg.kappa, l_f=cfg.l_f)
    elif cfg.scheme == "psa2":
        inst = PSA2.setup(
            cfg.weights,
            rng,
            kappa=cfg.kappa,
            N=N,
            l_i=cfg.l_i,
            l_f=cfg.l_f,
            hash_spec=hash_spec,
        )
    elif cfg.scheme == "pwsac":
        inst = PWSAc.setup(
            cfg.weights,
            rng,
            kappa=cfg.kappa,
            N=N,
            l_f=cfg.l_f,
            hash_spec=hash_spec,
            l=cfg.l,
        )
    elif cfg.scheme == "pwsah":
        inst = PWSAh.setup(
            cfg.weights,
            rng,
            T=T,
            kappa=cfg.kappa,
            keypair=keypair,
            l=cfg.l,
            lam=cfg.lam,
            l_f=cfg.l_f,
        )
    else:
        params = None
        if cfg.gamma is not None:
            n = max(len(as_matrix(w)[0]) for w in cfg.weights)
            params = EncodingParams(
                cfg.l_i, cfg.l_f, cfg.gamma, cfg.delta, cfg.lam, cfg.slots, n, cfg.M
            )
        inst = PWSAhPacked.setup(
            cfg.weights,
            rng,
            T=T,
            kappa=cfg.kappa,
            keypair=keypair,
            l_i=cfg.l_i,
            l_f=cfg.l_f,
            lam=cfg.lam,
            params=params,
        )

    if cfg.shares is None:
        return inst
    if inst.n_a != 1 or not all(isinstance(s, int) for s in cfg.shares):
        msg = "explicit shares need scalar shares and a single output row"
        raise ValueError(msg)
    if isinstance(inst, PWSAc):
        if not inst.is_scalar:
            msg = "explicit pwsac shares need scalar weights"
            raise ValueError(msg)
        weights = tuple(W[0][0] for W in inst.weights)
        shares = WeightedShareSet(tuple(cfg.shares), cfg.aggregator_share, weights)
    else:
        share_range = inst.shares_for(cfg.t)[0].range
        shares = (
            ZeroShareSet(cfg.t, tuple(cfg.shares), cfg.aggregator_share, share_range),
        )
    return inst.with_shares(cfg.t, shares)


def golden_suite() -> list[tuple[str, SchemeRunConfig, int | tuple[int, ...]]]:
    """Hand-checked toy instances and their aggregates."""
    toy = {"p": 5, "q": 7, "seed": "selftest"}
    return [
        (
            "psa1 Q=256",
            SchemeRunConfig(
                "psa1",
                (2, 1, 1),
                (3, 4, 5),
                kappa=8,
                l_i=4,
                shares=(100, 50, 30),
                aggregator_share=76,
                seed="selftest",
            ),
            15,
        ),
        (
            "psa2 N=35",
            SchemeRunConfig(
                "psa2",
                (1, 1),
                (2, 3),
                l_i=4,
                shares=(3, 4),
                aggregator_share=-7,
                hash_stub=2,
                **toy,
            ),
            5,
        ),
        (
            "pwsac N=35",
            SchemeRunConfig(
                "pwsac",
                (2, 3),
                (1, 2),
                l_i=4,
                shares=(5, 7),
                aggregator_share=-31,
                hash_stub=2,
                **toy,
            ),
            8,
        ),
        (
            "pwsah N=35",
            SchemeRunConfig(
                "pwsah", (3,), (4,), l_i=4, shares=(2,), aggregator_share=-2, **toy
            ),
            12,
        ),
        (
            "pwsah* budgeted",
            SchemeRunConfig(
                "pwsah*",
                (((1, -1), (2, 0)),),
                ((3, 1),),
                kappa=128,
                l_i=4,
                lam=4,
                seed="selftest",
            ),
            (2, 6),
        ),
        (
            "pwsah* gamma=6 delta=17",
            SchemeRunConfig(
                "pwsah*",
                (((1, -1), (2, 0)),),
                ((3, 1),),
                kappa=128,
                l_i=4,
                lam=4,
                gamma=6,
                delta=17,
                slots=2,
                seed="selftest",
            ),
            (2, 6),
        ),
    ]


def selftest() -> list[tuple[str, bool]]:
    """Run :func:`golden_suite` plus the closed-form budget and cost checks."""
    results = []
    for name, cfg, expected in golden_suite():
        inst = scheme_from_config(cfg)
        got = simulate(inst, cfg.inputs, cfg.t, RandomSource.deterministic(cfg.seed))
        results.append((name, got.aggregate == expected and got.matches))
    results.append(
        ("budget l=32", tuple(bit_budget(32, 80, 6, 50, 2048)) == (74, 198, 10))
    )
    results.append(
        (
            "costs n=6 m=10",
            predict_costs("pwsah", 50, 6, 6, m=10)[:3] == (36, 30, 6)
            and predict_costs("pwsah*", 50, 6, 6, m=10)[:3] == (6, 5, 1),
        )
    )
    return results


def _int_list(text: str) -> list[int]:
    """``2,3,5`` or the inclusive range ``2:10``."""
    if ":" in text:
        lo, hi = text.split(":")
        return list(range(int(lo), int(hi) + 1))
    return [int(v) for v in text.split(",")]


def _float_list(text: str) -> list[float]:
    return [float(v) for v in text.split(",")]


def _cmd_budget(args) -> int:
    with _config_errors(None):
        if args.psa:
            b = bit_budget_psa(args.l, args.M, args.bits)
        else:
            b = bit_budget(args.l, args.lam, args.n, args.M, args.bits)
    print(f"gamma={b.gamma},delta={b.delta},m={b.m}")  # noqa: T201
    return 0


def _cmd_run_scheme(args) -> int:
    cfg = load_scheme_run(args.config)
    with _config_errors(args.config):
        if args.scheme is not None:
            cfg = dataclasses.replace(cfg, scheme=args.scheme)
        inst = scheme_from_config(cfg)
        rng = RandomSource.deterministic(cfg.seed)
        res = simulate(inst, cfg.inputs, cfg.t, rng)
    if args.transcript is not None:
        text = transcript(res.contributions)
        Path(args.transcript).write_text(text, encoding="utf-8")

    def fmt(v) -> str:
        return str(v) if isinstance(v, int) else ",".join(str(x) for x in v)

    print(f"scheme={inst.scheme_id}")  # noqa: T201
    print(f"aggregate={fmt(res.aggregate)}")  # noqa: T201
    print(f"oracle={fmt(res.oracle)}")  # noqa: T201
    if cfg.l_f > 0:
        decoded = inst.decode(res.aggregate)
        if not isinstance(decoded, tuple):
            decoded = (decoded,)
        print(f"decoded={fmt(tuple(float(d) for d in decoded))}")  # noqa: T201
    print(f"oracle-match={'OK' if res.matches else 'FAIL'}")  # noqa: T201
    if not res.matches:
        msg = f"aggregate {res.aggregate} differs from {res.oracle}"
        raise OracleMismatchError(msg, inst.scheme_id, cfg.t)
    return 0


def _cmd_run_case_study(args) -> int:
    cfg = CaseStudyConfig() if args.config is None else load_case_study(args.config)
    overrides = {
        k: v
        for k, v in (
            ("scheme", args.scheme),
            ("share_mode", args.share_mode),
            ("horizon", args.horizon),
        )
        if v is not None
    }
    with _config_errors(args.config):
        cfg = dataclasses.replace(cfg, **overrides)
        res = run_case_study(cfg)
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    res.trajectories.to_csv(out / "trajectory.csv")
    res.trace.to_csv(out / "trace.csv")
    res.offline_trace.to_csv(out / "offline-trace.csv")

    mismatch = res.trajectories.first_mismatch()
    summary = f"steps={cfg.horizon},agents={cfg.M},bytes={res.trace.total_bytes}"
    print(summary)  # noqa: T201
    print(f"oracle-match={'OK' if mismatch is None else 'FAIL'}")  # noqa: T201
    if mismatch is not None:
        t, agent = mismatch
        msg = f"trajectory of agent {agent} differs from the oracle"
        raise OracleMismatchError(msg, cfg.scheme, t)
    return 0


def _cmd_bench(args) -> int:
    seed = args.seed
    with _config_errors(args.config):
        report = _run_sweep(args, seed)

    if args.output is None:
        print(report.to_csv(), end="")  # noqa: T201
    else:
        report.to_csv(args.output)
    if not report.counts_match:
        msg = "measured operation counts differ from the prediction"
        raise OracleMismatchError(msg, args.sweep)
    return 0


def _run_sweep(args, seed: str | None) -> bench.BenchmarkReport:
    if args.sweep == "edge-prob":
        base = CaseStudyConfig()
        if args.config is not None:
            base = load_case_study(args.config)
        overrides = {
            "M": args.M,
            "n": args.n,
            "m_dim": args.m_dim,
            "kappa": args.kappa,
            "lam": args.lam,
            "share_mode": args.share_mode,
            "seed": seed,
        }
        base = dataclasses.replace(
            base,
            horizon=args.horizon,
            **{k: v for k, v in overrides.items() if v is not None},
        )
        return bench.sweep_edge_prob(base, args.edge_probs, jobs=args.jobs)
    if args.sweep == "input-dim":
        return bench.sweep_input_dim(
            M=args.M or 25,
            deg=args.deg,
            dims=args.dims,
            kappa=args.kappa or 2048,
            l=args.l,
            lam=args.lam or 80,
            seed=seed or "privagg",
            jobs=args.jobs,
        )
    if args.sweep == "communication":
        return bench.sweep_communication(
            M=args.M or 2,
            n=args.n or 6,
            kappa=args.kappa or 2048,
            l=args.l,
            lam=args.lam or 80,
            seed=seed or "privagg",
        )
    return bench.sweep_budget(lam=args.lam or 80, bits=args.bits)


def _cmd_selftest(args) -> int:  # noqa: ARG001
    results = selftest()
    for name, ok in results:
        print(f"{name}: {'OK' if ok else 'FAIL'}")  # noqa: T201
    return 0 if all(ok for _, ok in results) else 1


def _subcommand(
    sub, name: str, func: Callable, help_text: str
) -> argparse.ArgumentParser:
    p = sub.add_parser(name, help=help_text, description=help_text)
    p.set_defaults(func=func)
    return p


def cli_dispatch(args=None) -> int:
    """Entry point of the ``privagg`` command.

    Returns
    -------
    ``0`` on success, ``2`` on a configuration error and ``1`` when a
    result differs from its plaintext oracle or a fixed-point value
    overflows.
    """
    parser = argparse.ArgumentParser(
        prog="privagg",
        description="""
Private weighted sum aggregation: parameter budgets, scheme runs, the
encrypted control case study and benchmarks.

Examples
--------

Dimension the packed scheme for 32-bit values, 6 inputs and 50 agents:

  $ privagg budget --l 32 --lambda 80 --n 6 --M 50 --bits 2048

Run one aggregation from a config file:

  $ privagg run-scheme --scheme pwsah --config toy.cfg

Compare naive and packed contributions for growing input dimension:

  $ privagg bench --sweep input-dim --M 25 --deg 10
        """,
        formatter_class=argparse.RawTextHelpFormatter,
    )

    # global options
    parser.add_argument(
        "--version",
        action="store_true",
        help="""Print privagg version and exit""",
    )
    parser.add_argument(
        "--verbose",
        "-v",
        action="store_true",
        help="""Increase the program verbosity""",
    )
    parser.add_argument(
        "--debug",
        action="store_true",
        help="""Increase the program verbosity to maximum""",
    )

    sub = parser.add_subparsers(dest="command")

    p = _subcommand(sub, "budget", _cmd_budget, "Print the packing layout")
    p.add_argument("--l", type=int, default=32, help="""Fixed-point bit width""")
    p.add_argument(
        "--lambda", dest="lam", type=int, default=80, help="""Statistical security"""
    )
    p.add_argument("--n", type=int, default=1, help="""Largest input dimension""")
    p.add_argument("--M", type=int, default=1, help="""Number of agents""")
    p.add_argument("--bits", type=int, default=2048, help="""Plaintext bits""")
    p.add_argument(
        "--psa",
        action="store_true",
        help="""Use the layout of the packed private sum""",
    )

    p = _subcommand(sub, "run-scheme", _cmd_run_scheme, "Run one scheme instance")
    p.add_argument("--config", required=True, help="""Scheme run config file""")
    p.add_argument("--scheme", choices=SCHEMES, help="""Override the scheme""")
    p.add_argument("--transcript", help="""Write the contribution transcript here""")

    p = _subcommand(
        sub, "run-case-study", _cmd_run_case_study, "Run the encrypted control loop"
    )
    p.add_argument("--config", help="""Case study config file""")
    p.add_argument("--scheme", choices=("pwsah", "pwsah*"))
    p.add_argument("--share-mode", choices=SHARE_MODES)
    p.add_argument("--horizon", type=int)
    p.add_argument(
        "--output-dir",
        "-o",
        default=".",
        help="""Directory receiving trajectory.csv and the trace files""",
    )

    p = _subcommand(sub, "bench", _cmd_bench, "Benchmark naive against packed")
    p.add_argument("--sweep", choices=bench.SWEEPS, required=True)
    p.add_argument("--config", help="""Base case study config (edge-prob)""")
    p.add_argument("--M", type=int, help="""Number of agents""")
    p.add_argument("--deg", type=int, default=10, help="""Degree (input-dim)""")
    p.add_argument(
        "--dims",
        type=_int_list,
        default=list(range(2, 11)),
        help="""Dimensions, as 2,4,6 or 2:10 (input-dim)""",
    )
    p.add_argument(
        "--edge-probs",
        type=_float_list,
        default=[0.2, 0.4, 0.6, 0.8, 1.0],
        help="""Edge probabilities (edge-prob)""",
    )
    p.add_argument("--n", type=int, help="""State / input dimension""")
    p.add_argument("--m-dim", type=int, help="""Control input dimension""")
    p.add_argument("--kappa", type=int, help="""Key size in bits""")
    p.add_argument("--l", type=int, default=32, help="""Fixed-point bit width""")
    p.add_argument("--lambda", dest="lam", type=int, help="""Statistical security""")
    p.add_argument("--bits", type=int, default=2048, help="""Plaintext bits (budget)""")
    p.add_argument("--horizon", type=int, default=1, help="""Control steps""")
    p.add_argument("--share-mode", choices=SHARE_MODES)
    p.add_argument("--seed", help="""Seed of every random choice""")
    p.add_argument("--jobs", "-j", type=int, default=1, help="""Worker threads""")
    p.add_argument("--output", "-o", help="""Output CSV, stdout by default""")

    _subcommand(sub, "selftest", _cmd_selftest, "Run the toy golden suite")

    args = parser.parse_args(args)

    if args.verbose:
        plogging.setup(logging.INFO, logging.getLogger("privagg"))
    elif args.debug:
        plogging.setup(logging.DEBUG, logging.root)
    else:
        plogging.setup(logging.WARNING)

    if args.version:
        print(__version__)  # noqa: T201
        sys.exit()

    if args.command is None:
        parser.print_help()
        return 2

    try:
        return args.func(args)
    except ConfigError as e:
        log.error(str(e))
        return 2
    except (OracleMismatchError, OverflowGuardError) as e:
        log.error(str(e))
        return 1
