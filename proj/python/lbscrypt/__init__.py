"""Private k-NN protocol simulator and the attacks against it."""

import json

from ._lbscrypt import (
    AttackError,
    CryptoError,
    ValidationError,
    __version__,
    attack_flaw,
    attack_pipeline,
    msb_collision,
    simulate,
    unmask,
    worked_examples,
)


def simulate_dict(scenario, mode=None, seed=None):
    """simulate() taking and returning plain dicts."""
    text = scenario if isinstance(scenario, str) else json.dumps(scenario)
    return json.loads(simulate(text, mode, seed))


def pipeline_dict(transcript, **kwargs):
    """attack_pipeline() taking and returning plain dicts."""
    text = transcript if isinstance(transcript, str) else json.dumps(transcript)
    return json.loads(attack_pipeline(text, **kwargs))


__all__ = [
    "AttackError",
    "CryptoError",
    "ValidationError",
    "__version__",
    "attack_flaw",
    "attack_pipeline",
    "msb_collision",
    "pipeline_dict",
    "simulate",
    "simulate_dict",
    "unmask",
    "worked_examples",
]
