from __future__ import annotations

import numpy as np

from privagg.control import AgentPlant, dlqr, generate_plants, random_orthogonal
from privagg.numeric import RandomSource
from privagg.simnet import Topology


def test_random_orthogonal():
    q = random_orthogonal(4, np.random.default_rng(0))
    assert np.allclose(q @ q.T, np.eye(4))


def test_dlqr_stabilizes():
    A = np.array([[1.1, 0.2], [0.0, 0.9]])
    B = np.array([[1.0], [0.5]])
    K = dlqr(A, B)
    assert K.shape == (1, 2)
    assert max(abs(np.linalg.eigvals(A - B @ K))) < 1


def test_from_float():
    p = AgentPlant.from_float(
        np.array([[0.5, 0.0], [0.25, 1.0]]),
        np.array([[1.0], [-0.5]]),
        np.array([0.125, -1.0]),
        {1: np.array([[0.1, 0.2]])},
        8,
    )
    assert p.A == ((128, 0), (64, 256))
    assert p.B == ((256,), (-128,))
    assert p.x0 == (32, -256)
    assert p.gains[1] == ((26, 51),)
    assert (p.n, p.m_dim) == (2, 1)

    A, B, gains = p.as_float(8)
    assert A[1, 0] == 0.25
    assert gains[1][0, 0] == 26 / 256


def test_generate_plants():
    topo = Topology.from_edges(3, [(1, 2)])
    plants = generate_plants(topo, 2, 1, 8, RandomSource.deterministic("plants"))
    assert sorted(plants) == [1, 2, 3]
    assert sorted(plants[1].gains) == [1, 2]
    assert sorted(plants[3].gains) == [3]
    assert len(plants[2].gains[1]) == 1
    assert len(plants[2].gains[1][0]) == 2
    assert all(abs(v) <= 256 for v in plants[1].x0)

    again = generate_plants(topo, 2, 1, 8, RandomSource.deterministic("plants"))
    assert again == plants
