"""Generalized random-choice scheme for 1D balance laws."""

import json as _json

from ._core import (
    CflViolated,
    ConfigError,
    GlimmError,
    NoSolution,
    OutOfPhaseBox,
    SupportExceedsWindow,
    check,
    check_names,
    generalized,
    interaction_potential,
    riemann,
    sample,
    study,
    study_names,
)
from ._core import run as _run


def run(config, output_dir=None):
    """Run a configuration given as a dict or a JSON string."""
    text = config if isinstance(config, str) else _json.dumps(config)
    return _run(text, output_dir)


__all__ = [
    "CflViolated",
    "ConfigError",
    "GlimmError",
    "NoSolution",
    "OutOfPhaseBox",
    "SupportExceedsWindow",
    "check",
    "check_names",
    "generalized",
    "interaction_potential",
    "riemann",
    "run",
    "sample",
    "study",
    "study_names",
]
