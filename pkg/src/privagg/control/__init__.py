"""Encrypted distributed control on top of the weight-hiding schemes.

Each agent aggregates ``u_i = Σ_j K_ij x_j`` over its closed neighborhood,
with the gains ``K_ij`` encrypted under its own key. See
:func:`.run_case_study`.
"""

from __future__ import annotations

from .casestudy import (
    TRAJECTORY_COLUMNS,
    CaseStudyResult,
    Trajectory,
    TrajectoryPair,
    advance,
    build_network,
    control_inputs,
    float_reference,
    plaintext_oracle,
    requantize,
    run_case_study,
)
from .config import (
    CASE_STUDY_SCHEMES,
    SCHEMES,
    SHARE_MODES,
    CaseStudyConfig,
    SchemeRunConfig,
    load_case_study,
    load_scheme_run,
    parse_values,
    read_config,
)
from .plant import AgentPlant, dlqr, generate_plants, random_orthogonal

__all__ = [
    "CASE_STUDY_SCHEMES",
    "SCHEMES",
    "SHARE_MODES",
    "TRAJECTORY_COLUMNS",
    "AgentPlant",
    "CaseStudyConfig",
    "CaseStudyResult",
    "SchemeRunConfig",
    "Trajectory",
    "TrajectoryPair",
    "advance",
    "build_network",
    "control_inputs",
    "dlqr",
    "float_reference",
    "generate_plants",
    "load_case_study",
    "load_scheme_run",
    "parse_values",
    "plaintext_oracle",
    "random_orthogonal",
    "read_config",
    "requantize",
    "run_case_study",
]
