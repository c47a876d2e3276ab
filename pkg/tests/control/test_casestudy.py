from __future__ import annotations

import dataclasses

import numpy as np
import pytest

from privagg.control import (
    TRAJECTORY_COLUMNS,
    AgentPlant,
    CaseStudyConfig,
    TrajectoryPair,
    advance,
    build_network,
    control_inputs,
    float_reference,
    plaintext_oracle,
    requantize,
    run_case_study,
)
from privagg.exceptions import OverflowGuardError
from privagg.simnet import Topology

SMALL = CaseStudyConfig(
    M=3, n=2, m_dim=2, l_i=8, l_f=8, lam=16, kappa=256, horizon=3, edge_prob=1.0
)


def _scalar_plant(a=128, x0=256, k=-64):
    return AgentPlant(((a,),), ((256,),), (x0,), {1: ((k,),)})


def test_requantize():
    assert requantize(384, 8) == 2
    assert requantize(-384, 8) == -2
    assert requantize(383, 8) == 1
    assert requantize(0, 8) == 0


def test_advance():
    cfg = CaseStudyConfig(M=1, n=1, m_dim=1)
    plant = _scalar_plant()
    u = control_inputs(plant, {1: (256,)})
    assert u == (-16384,)
    assert advance(plant, (256,), u, cfg, 1, 0) == ((-64,), (64,))


def test_overflow_guard():
    cfg = CaseStudyConfig(M=1, n=1, m_dim=1, horizon=2)
    plants = {1: _scalar_plant(a=32767, x0=25600, k=0)}
    with pytest.raises(OverflowGuardError) as e:
        plaintext_oracle(cfg, Topology.empty(1), plants)
    assert (e.value.agent, e.value.t) == (1, 1)

    plants = {1: _scalar_plant(x0=40000)}
    with pytest.raises(OverflowGuardError) as e:
        plaintext_oracle(cfg, Topology.empty(1), plants)
    assert e.value.t == 0


def test_overflow_guard_encrypted():
    cfg = CaseStudyConfig(M=1, n=1, m_dim=1, horizon=1)
    plants = {1: _scalar_plant(a=32767, x0=25600, k=0)}
    with pytest.raises(OverflowGuardError):
        run_case_study(cfg, Topology.empty(1), plants)


def test_build_network_is_seeded():
    topo, plants = build_network(SMALL)
    assert topo == Topology.complete(3)
    assert build_network(SMALL)[1] == plants
    assert build_network(dataclasses.replace(SMALL, seed="other"))[1] != plants


@pytest.mark.parametrize("scheme", ["pwsah*", "pwsah"])
def test_exact_trajectory(scheme):
    cfg = dataclasses.replace(SMALL, scheme=scheme)
    res = run_case_study(cfg)
    assert res.trajectories.exact
    assert res.trajectories.first_mismatch() is None
    assert len(res.trajectories.encrypted.states) == cfg.horizon + 1
    assert res.groups == {1: (1, 2, 3), 2: (1, 2, 3), 3: (1, 2, 3)}

    per_contribution = 1 if scheme == "pwsah*" else cfg.m_dim
    assert set(res.ciphertexts_sent.values()) == {per_contribution}
    assert len(res.ciphertexts_sent) == 9
    assert res.slots == {i: 3 if scheme == "pwsah*" else 1 for i in (1, 2, 3)}

    # every agent sends to its two neighbors at every step
    assert len(res.trace.messages) == 6 * cfg.horizon
    assert res.offline_trace.total_bytes == 0

    ref = float_reference(cfg, res.plants)
    for i, x in res.trajectories.encrypted.states[-1].items():
        assert np.allclose(np.array(x) / 256, ref[-1][i], atol=0.05)


@pytest.mark.parametrize(
    ("scheme", "mode"),
    [
        ("pwsah*", "one-round"),
        ("pwsah*", "two-round"),
        ("pwsah", "one-round"),
        ("pwsah", "two-round"),
    ],
)
def test_share_modes(scheme, mode):
    cfg = dataclasses.replace(
        SMALL, M=4, edge_prob=0.5, horizon=2, scheme=scheme, share_mode=mode
    )
    res = run_case_study(cfg)
    assert res.trajectories.exact
    assert res.offline_trace.total_bytes > 0
    assert set(res.offline_trace.counters()) <= {1, 2, 3, 4}


def test_scalar_two_round():
    cfg = dataclasses.replace(
        SMALL, n=1, m_dim=1, horizon=2, scheme="pwsah", share_mode="two-round"
    )
    assert run_case_study(cfg).trajectories.exact


def test_isolated_agents():
    cfg = dataclasses.replace(SMALL, edge_prob=0.0, horizon=2)
    res = run_case_study(cfg)
    assert res.trajectories.exact
    assert res.trace.total_bytes == 0
    assert res.groups == {1: (1,), 2: (2,), 3: (3,)}


def test_deterministic():
    cfg = dataclasses.replace(SMALL, horizon=2)
    a = run_case_study(cfg)
    b = run_case_study(cfg)
    assert a.trajectories.encrypted == b.trajectories.encrypted
    assert a.trace.fingerprint() == b.trace.fingerprint()


def test_trajectory_table(tmptestdir):
    cfg = dataclasses.replace(SMALL, horizon=1, M=2)
    pair = run_case_study(cfg).trajectories
    df = pair.to_dataframe()
    assert list(df.columns) == TRAJECTORY_COLUMNS
    assert len(df) == (cfg.horizon + 1) * cfg.M * cfg.n
    assert (df["encrypted_raw"] == df["oracle_raw"]).all()

    path = tmptestdir / "trajectory.csv"
    pair.to_csv(path)
    assert path.read_text() == pair.to_csv()


def test_first_mismatch():
    cfg = dataclasses.replace(SMALL, horizon=2)
    oracle = plaintext_oracle(cfg)
    tampered = dataclasses.replace(oracle, inputs=[dict(u) for u in oracle.inputs])
    tampered.inputs[1][2] = (0, 0)
    pair = TrajectoryPair(tampered, oracle)
    assert not pair.exact
    assert pair.first_mismatch() == (1, 2)


@pytest.mark.slow
@pytest.mark.parametrize("mode", ["dealer", "one-round", "two-round"])
@pytest.mark.parametrize("scheme", ["pwsah*", "pwsah"])
def test_default_configuration_is_exact(scheme, mode):
    cfg = dataclasses.replace(CaseStudyConfig(), scheme=scheme, share_mode=mode)
    assert (cfg.M, cfg.n, cfg.m_dim, cfg.horizon) == (6, 2, 2, 20)
    res = run_case_study(cfg)
    assert res.trajectories.exact
    assert len(res.trajectories.encrypted.states) == 21
    assert sorted(res.trajectories.encrypted.states[-1]) == [1, 2, 3, 4, 5, 6]
