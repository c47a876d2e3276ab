"""Private weighted sum aggregation over Paillier.

Agents ``1..M`` send encrypted contributions to an aggregator (participant
``0``) that learns ``Σ_i W_i x_i`` and nothing else. See
:mod:`privagg.schemes` for the schemes, :mod:`privagg.simnet` for the
protocol simulator and :mod:`privagg.control` for the encrypted control
case study.
"""

from __future__ import annotations

from ._version import version as __version__
from .schemes import predict_costs, run, scheme_class, setup, simulate

__all__ = [
    "__version__",
    "predict_costs",
    "run",
    "scheme_class",
    "setup",
    "simulate",
]
