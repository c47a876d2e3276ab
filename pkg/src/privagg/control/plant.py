"""Linear agent dynamics and local state-feedback gains.

Agent ``i`` evolves as ``x_i(t+1) = A_i x_i(t) + B_i u_i(t)`` with
``u_i(t) = Σ_{j ∈ N_i ∪ {i}} K_ij x_j(t)``. Plants are generated in double
precision and quantized to the fixed-point grid once; every later step
works on the raw integers.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np

from ..encoding import quantize
from ..numeric import RandomSource
from ..schemes.base import Matrix
from ..simnet import Topology

log = logging.getLogger(__name__)


def _quantize_matrix(a: np.ndarray, l_f: int) -> Matrix:
    a = np.atleast_2d(a)
    return tuple(tuple(quantize(float(v), l_f) for v in row) for row in a)


@dataclass(frozen=True)
class AgentPlant:
    """Raw fixed-point dynamics of one agent.

    `gains` maps every ``j ∈ N_i ∪ {i}`` to the ``m_i × n_j`` matrix
    ``K_ij``.
    """

    A: Matrix
    B: Matrix
    x0: tuple[int, ...]
    gains: Mapping[int, Matrix] = field(default_factory=dict)

    @classmethod
    def from_float(
        cls,
        A: np.ndarray,
        B: np.ndarray,
        x0: np.ndarray,
        gains: Mapping[int, np.ndarray],
        l_f: int,
    ) -> AgentPlant:
        return cls(
            _quantize_matrix(A, l_f),
            _quantize_matrix(B, l_f),
            tuple(quantize(float(v), l_f) for v in np.atleast_1d(x0)),
            {j: _quantize_matrix(K, l_f) for j, K in gains.items()},
        )

    @property
    def n(self) -> int:
        return len(self.A)

    @property
    def m_dim(self) -> int:
        return len(self.B[0])

    def as_float(
        self, l_f: int
    ) -> tuple[np.ndarray, np.ndarray, dict[int, np.ndarray]]:
        """``A``, ``B`` and the gains decoded to floats."""
        scale = float(1 << l_f)
        return (
            np.array(self.A, dtype=float) / scale,
            np.array(self.B, dtype=float) / scale,
            {j: np.array(K, dtype=float) / scale for j, K in self.gains.items()},
        )


def random_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed orthogonal matrix from the QR factorization of a
    Gaussian matrix."""
    q, r = np.linalg.qr(rng.normal(size=(n, n)))
    return q * np.sign(np.diag(r))


def dlqr(
    A: np.ndarray,
    B: np.ndarray,
    Q: np.ndarray | None = None,
    R: np.ndarray | None = None,
    max_iter: int = 10_000,
    tol: float = 1e-12,
) -> np.ndarray:
    """Discrete LQR gain ``K`` (with ``u = −K x``) by Riccati iteration.

    Raises
    ------
    ArithmeticError
        if the iteration does not converge.
    """
    n, m = B.shape
    Q = np.eye(n) if Q is None else Q
    R = np.eye(m) if R is None else R
    P = Q.copy()
    for _ in range(max_iter):
        BtP = B.T @ P
        K = np.linalg.solve(R + BtP @ B, BtP @ A)
        P_next = Q + A.T @ P @ (A - B @ K)
        if np.max(np.abs(P_next - P)) < tol:
            return K
        P = P_next
    msg = "Riccati iteration did not converge"
    raise ArithmeticError(msg)


def generate_plants(
    topology: Topology,
    n: int,
    m_dim: int,
    l_f: int,
    rng: RandomSource,
    coupling: float = 0.01,
    radius: float = 0.9,
) -> dict[int, AgentPlant]:
    """Stable random plants with local LQR gains and weak coupling.

    ``A_i`` is a random orthogonal matrix scaled to spectral radius
    `radius`, ``K_ii`` the negated local LQR gain and ``K_ij`` for
    neighbors a Gaussian matrix scaled by `coupling`.
    """
    gen = rng.numpy_generator()
    plants = {}
    for i in range(1, topology.M + 1):
        A = radius * random_orthogonal(n, gen)
        B = gen.normal(size=(n, m_dim))
        gains = {i: -dlqr(A, B)}
        for j in topology.neighbors(i):
            gains[j] = coupling * gen.normal(size=(m_dim, n))
        x0 = gen.uniform(-1.0, 1.0, size=n)
        plants[i] = AgentPlant.from_float(A, B, x0, dict(sorted(gains.items())), l_f)
    log.debug(f"generated {len(plants)} plant(s) with n={n}, m={m_dim}")
    return plants
