from __future__ import annotations

import pytest

from privagg.control import (
    CaseStudyConfig,
    SchemeRunConfig,
    load_case_study,
    load_scheme_run,
    parse_values,
    read_config,
)
from privagg.exceptions import ConfigError


def test_parse_values():
    assert parse_values("3; 1,-1/2,0; 4,5") == (3, ((1, -1), (2, 0)), (4, 5))
    assert parse_values(" 7 ;") == (7,)
    with pytest.raises(ValueError):
        parse_values("a,b")


def test_read_config(tmptestdir):
    path = tmptestdir / "raw.cfg"
    path.write_text("# comment\n\nM = 4\nscheme=pwsah  # inline\n")
    assert read_config(path) == {"M": "4", "scheme": "pwsah"}

    path.write_text("M = 4\nM = 5\n")
    with pytest.raises(ConfigError) as e:
        read_config(path)
    assert e.value.key == "M"

    path.write_text("just words\n")
    with pytest.raises(ConfigError):
        read_config(path)

    with pytest.raises(ConfigError):
        read_config(tmptestdir / "missing.cfg")


def test_load_case_study(tmptestdir):
    path = tmptestdir / "case.cfg"
    path.write_text("M = 4\nlambda = 24\nedge_prob = 0.25\nscheme = pwsah\n")
    cfg = load_case_study(path)
    assert cfg == CaseStudyConfig(M=4, lam=24, edge_prob=0.25, scheme="pwsah")
    assert cfg.l == 16

    path.write_text("colour = blue\n")
    with pytest.raises(ConfigError) as e:
        load_case_study(path)
    assert e.value.key == "colour"

    path.write_text("M = four\n")
    with pytest.raises(ConfigError):
        load_case_study(path)

    path.write_text("scheme = psa1\n")
    with pytest.raises(ConfigError):
        load_case_study(path)


def test_case_study_config_checks():
    with pytest.raises(ValueError):
        CaseStudyConfig(share_mode="gossip")
    with pytest.raises(ValueError):
        CaseStudyConfig(horizon=0)
    with pytest.raises(ValueError):
        CaseStudyConfig(edge_prob=1.5)


def test_load_scheme_run(tmptestdir):
    path = tmptestdir / "run.cfg"
    path.write_text(
        "scheme = pwsah*\nweights = 1,-1/2,0\ninputs = 3,1\nkappa = 128\n"
        "l_i = 4\nlambda = 4\n"
    )
    cfg = load_scheme_run(path)
    assert cfg.weights == (((1, -1), (2, 0)),)
    assert cfg.inputs == ((3, 1),)
    assert cfg.M == 1
    assert cfg.l == 4


def test_scheme_run_config_checks():
    with pytest.raises(ValueError):
        SchemeRunConfig("psa3", (1,), (1,))
    with pytest.raises(ValueError):
        SchemeRunConfig("psa1", (1, 2), (1,))
    with pytest.raises(ValueError):
        SchemeRunConfig("psa2", (1,), (1,), p=5)
    with pytest.raises(ValueError):
        SchemeRunConfig("psa2", (1,), (1,), shares=(1,))
    with pytest.raises(ValueError):
        SchemeRunConfig("pwsah*", (1,), (1,), gamma=6, delta=17)
    with pytest.raises(ValueError):
        SchemeRunConfig("pwsah", (1,), (1,), gamma=6, delta=17, slots=2)


def test_packing_layout_keys(tmptestdir):
    path = tmptestdir / "layout.cfg"
    path.write_text(
        "scheme = pwsah*\nweights = 1,-1/2,0\ninputs = 3,1\n"
        "gamma = 6\ndelta = 17\nm = 2\n"
    )
    cfg = load_scheme_run(path)
    assert (cfg.gamma, cfg.delta, cfg.slots) == (6, 17, 2)

    path.write_text("scheme = pwsah*\nweights = 1\ninputs = 3\ngamma = 6\n")
    with pytest.raises(ConfigError):
        load_scheme_run(path)
