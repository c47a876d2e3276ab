from __future__ import annotations

from typing import Any


def default_settings() -> dict[str, Any]:
    """Returns the package-wide defaults for key generation and simulation.

    Examples
    --------
    >>> from privagg import numeric, settings
    >>> settings.DEFAULT_SETTINGS["miller_rabin_rounds"] = 64
    >>> rng = numeric.RandomSource.deterministic("keys")
    >>> modulus = numeric.gen_modulus(2048, rng)  # primes tested with 64 rounds
    >>> settings.DEFAULT_SETTINGS = settings.default_settings()
    """

    return {
        "kappa": 2048,
        "lambda": 80,
        "miller_rabin_rounds": 40,
        "toy_prime_limit": 2**16,
        "prime_pair_retries": 64,
        "prime_candidate_retries": 10_000,
        "topology_retries": 100,
        "hash_domain_tag": b"privagg/round-base",
    }


DEFAULT_SETTINGS: dict[str, ...] = default_settings()
"""Global dictionary storing the default settings of the package.

Modify this global variable before generating keys or running simulations.

Examples
--------
>>> from privagg import settings
>>> settings.DEFAULT_SETTINGS["topology_retries"] = 10
"""
