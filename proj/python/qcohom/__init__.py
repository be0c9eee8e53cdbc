"""Cocycle and cohomology verification suites (C++ core)."""

import json

from ._core import (
    ConfigError,
    Cocycle,
    NonMarkovianError,
    WindowOverflowError,
    car_relations,
    demo_inner,
    markovian_cocycle,
    registered_findings,
    suite_names,
    taylor_coefficients,
    trivial_cocycle,
)
from ._core import run_suite_jsonl

__all__ = [
    "ConfigError",
    "Cocycle",
    "NonMarkovianError",
    "WindowOverflowError",
    "car_relations",
    "demo_inner",
    "markovian_cocycle",
    "registered_findings",
    "run_suite",
    "run_suite_jsonl",
    "suite_names",
    "taylor_coefficients",
    "trivial_cocycle",
]


def run_suite(name, config=None, seed=None, window=None, literal=False, out=None):
    """Run a suite; returns the report as a list of dicts."""
    text = run_suite_jsonl(name, config=config, seed=seed, window=window, literal=literal, out=out)
    return [json.loads(line) for line in text.splitlines() if line]
