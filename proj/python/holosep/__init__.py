"""Holonomy/dynamics separation of subspace evolutions."""

import json

from ._core import (
    DesignError,
    HolosepError,
    InfeasibleDesignError,
    NumericalError,
    ParseError,
    PreconditionError,
    ValidationError,
    design_gate,
    purely_holonomic_check,
    scenario_digest,
    simulate_csv,
)
from . import _core

__all__ = [
    "DesignError",
    "HolosepError",
    "InfeasibleDesignError",
    "NumericalError",
    "ParseError",
    "PreconditionError",
    "ValidationError",
    "design_gate",
    "purely_holonomic_check",
    "run_separation",
    "scenario_digest",
    "simulate_csv",
    "verify_gate",
]


def _text(scenario):
    return scenario if isinstance(scenario, str) else json.dumps(scenario)


def run_separation(scenario, method="projector-product", schedule="linear", steps=None, tol=None):
    """Run the pipeline on a scenario (JSON text or dict) and return the report as a dict."""
    return json.loads(_core.run_separation(_text(scenario), method, schedule, steps, tol))


def verify_gate(hamiltonian, N, m, profile="constant", detune_amplitude=None):
    return json.loads(_core.verify_gate(hamiltonian, N, m, profile, detune_amplitude))
