from __future__ import annotations

import pandas as pd
import pytest

from privagg import __version__, bench, cli
from privagg.exceptions import OverflowGuardError

TOY_RUN = """\
scheme = pwsah
weights = 3
inputs = 4
p = 5
q = 7
l_i = 4
shares = 2
aggregator_share = -2
seed = selftest
"""

SMALL_CASE = """\
M = 3
kappa = 256
lambda = 16
edge_prob = 1.0
scheme = pwsah
"""


def test_budget(capsys):
    assert (
        cli.cli_dispatch(
            ["budget", "--l", "32", "--lambda", "80", "--n", "6", "--M", "50"]
        )
        == 0
    )
    assert capsys.readouterr().out == "gamma=74,delta=198,m=10\n"

    assert cli.cli_dispatch(["budget", "--psa", "--l", "32", "--M", "50"]) == 0
    assert capsys.readouterr().out == "gamma=65,delta=72,m=28\n"


def test_version_and_help(capsys):
    with pytest.raises(SystemExit):
        cli.cli_dispatch(["--version"])
    assert capsys.readouterr().out.strip() == __version__

    assert cli.cli_dispatch([]) == 2
    assert "privagg budget" in capsys.readouterr().out


def test_run_scheme(tmptestdir, capsys):
    cfg = tmptestdir / "toy-run.cfg"
    cfg.write_text(TOY_RUN)
    transcript = tmptestdir / "toy-run.txt"

    rc = cli.cli_dispatch(
        ["-v", "run-scheme", "--config", str(cfg), "--transcript", str(transcript)]
    )
    assert rc == 0
    out = capsys.readouterr().out.splitlines()
    assert out == ["scheme=pwsah", "aggregate=12", "oracle=12", "oracle-match=OK"]
    assert transcript.read_text()


def test_run_scheme_bad_config(tmptestdir):
    cfg = tmptestdir / "bad-run.cfg"

    cfg.write_text(TOY_RUN + "colour = blue\n")
    assert cli.cli_dispatch(["run-scheme", "--config", str(cfg)]) == 2

    cfg.write_text("scheme = psa2\nweights = 1; 1\ninputs = 2; 3\nhash_stub = 2\n")
    assert cli.cli_dispatch(["run-scheme", "--config", str(cfg)]) == 2

    missing = tmptestdir / "no-such.cfg"
    assert cli.cli_dispatch(["run-scheme", "--config", str(missing)]) == 2


def test_selftest(capsys):
    assert cli.cli_dispatch(["selftest"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == len(cli.golden_suite()) + 2
    assert all(line.endswith(": OK") for line in lines)


def test_run_case_study(tmptestdir, capsys):
    cfg = tmptestdir / "case.cfg"
    cfg.write_text(SMALL_CASE)
    out_dir = tmptestdir / "case-out"

    rc = cli.cli_dispatch(
        [
            "run-case-study",
            "--config",
            str(cfg),
            "--horizon",
            "2",
            "--output-dir",
            str(out_dir),
        ]
    )
    assert rc == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith("steps=2,agents=3,bytes=")
    assert out[1] == "oracle-match=OK"
    for name in ("trajectory.csv", "trace.csv", "offline-trace.csv"):
        assert (out_dir / name).stat().st_size > 0

    assert cli.cli_dispatch(["run-case-study", "--horizon", "0"]) == 2


def test_run_case_study_overflow(monkeypatch, tmptestdir):
    def overflow(config):  # noqa: ARG001
        msg = "state out of range"
        raise OverflowGuardError(msg, 1, 0)

    monkeypatch.setattr(cli, "run_case_study", overflow)
    assert cli.cli_dispatch(["run-case-study", "-o", str(tmptestdir)]) == 1


def test_bench(tmptestdir, capsys):
    out = tmptestdir / "budget.csv"
    assert cli.cli_dispatch(["bench", "--sweep", "budget", "-o", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == bench.BENCH_HEADER
    assert len(lines) == 2 + 4 * 10 * 3

    rc = cli.cli_dispatch(
        ["bench", "--sweep", "communication", "--kappa", "256", "--l", "8"]
        + ["--lambda", "16"]
    )
    assert rc == 0
    text = capsys.readouterr().out
    assert text.startswith(bench.BENCH_HEADER + "\n")
    assert len(text.splitlines()) == 4


def test_bench_count_mismatch(monkeypatch, capsys):
    table = pd.DataFrame(
        {
            "exps_predicted": [4],
            "exps_measured": [5],
            "adds_predicted": [1],
            "adds_measured": [1],
            "ciphertexts_predicted": [2],
            "ciphertexts_sent": [2],
        }
    )
    monkeypatch.setattr(
        bench, "sweep_budget", lambda **_: bench.BenchmarkReport("budget", table)
    )
    assert cli.cli_dispatch(["bench", "--sweep", "budget"]) == 1
    assert capsys.readouterr().out.startswith(bench.BENCH_HEADER)


def test_int_list():
    assert cli._int_list("2:5") == [2, 3, 4, 5]
    assert cli._int_list("2,4,8") == [2, 4, 8]


def test_rejected_parameters_exit_two(tmptestdir, capsys):
    budget = ["budget", "--l", "32", "--n", "6", "--M", "50", "--bits", "64"]
    assert cli.cli_dispatch(budget) == 2
    assert cli.cli_dispatch(["bench", "--sweep", "budget", "--bits", "64"]) == 2
    dims = ["bench", "--sweep", "input-dim", "--M", "5", "--deg", "5"]
    assert cli.cli_dispatch(dims) == 2

    cfg = tmptestdir / "tiny-key.cfg"
    cfg.write_text("M = 3\nkappa = 64\n")
    out_dir = tmptestdir / "tiny-key-out"
    rc = cli.cli_dispatch(
        ["run-case-study", "--config", str(cfg), "--horizon", "1", "-o", str(out_dir)]
    )
    assert rc == 2
    assert capsys.readouterr().out == ""
