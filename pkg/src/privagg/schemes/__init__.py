r"""Private (weighted) sum aggregation schemes.

Every scheme follows the same life cycle: ``setup`` provisions keys,
encrypted weights and shares of zero, :meth:`~.AggregationScheme.enc` turns
an agent's input into a :class:`.Contribution` and
:meth:`~.AggregationScheme.aggr_dec` recovers ``Σ_i W_i x_i`` from all
contributions of one time step.

Available schemes:

* :class:`.PSA1`, masked residues modulo ``Q``.
* :class:`.PSA2`, values in the exponent of ``1+N`` with a hashed round base.
* :class:`.PWSAc`, weights held by the aggregator.
* :class:`.PWSAh`, weights encrypted under the aggregator's Paillier key.
* :class:`.PWSAhPacked`, the packed variant of :class:`.PWSAh`.

>>> from privagg import schemes
>>> from privagg.numeric import RandomSource
>>> rng = RandomSource.deterministic("doc")
>>> inst = schemes.setup("pwsah", [3, 2], rng, kappa=128, l=8, lam=16)
>>> schemes.run(inst, [4, -1], t=0, rng=rng)
10
"""

from __future__ import annotations

from importlib import import_module

from .base import (
    AggregationScheme,
    Contribution,
    HashSpec,
    derive_round_base,
    transcript,
    weighted_sum,
)
from .costs import CostPrediction, predict_costs
from .game import AdversaryScript, Challenge, ChallengeRejectedError, GameReport, play
from .generic import run, scheme_class, setup
from .simulate import SimResult, simulate

# mapping from scheme class to module for lazy loading
_scheme_classes = {
    "PSA1": "psa",
    "PSA2": "psa",
    "PWSAc": "pwsac",
    "PWSAh": "pwsah",
    "PWSAhPacked": "packed",
}

__all__ = list(_scheme_classes)
__all__ += [
    "AdversaryScript",
    "AggregationScheme",
    "Challenge",
    "ChallengeRejectedError",
    "Contribution",
    "CostPrediction",
    "GameReport",
    "HashSpec",
    "SimResult",
    "derive_round_base",
    "play",
    "predict_costs",
    "run",
    "scheme_class",
    "setup",
    "simulate",
    "transcript",
    "weighted_sum",
]


# Lazy loader
def __getattr__(name):
    if name in _scheme_classes:
        mod = import_module(f".{_scheme_classes[name]}", __name__)
        cls = getattr(mod, name)
        globals().update({name: cls})
        return cls
    msg = f"module {__name__} has no attribute {name}"
    raise AttributeError(msg)


def __dir__():
    return __all__ + list(globals().keys())
