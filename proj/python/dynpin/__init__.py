"""Python bindings for the dynpin core.

Profiles and thread indices are 0-based here; the CSV/JSON artifacts written
by ``run_experiment`` use 1-based ids.
"""

import json

from ._core import (
    ConfigError,
    Game,
    MeasurementError,
    ParseError,
    Scenario,
    SizeError,
    Trace,
    _completion_stats_json,
    _equilibria_json,
    mean_field_drift,
    perturb,
    project_to_simplex,
    run,
    run_baseline,
    run_experiment,
    time_fraction_near,
)

__all__ = [
    "ConfigError",
    "Game",
    "MeasurementError",
    "ParseError",
    "Scenario",
    "SizeError",
    "Trace",
    "completion_stats",
    "enumerate_pure_nash",
    "mean_field_drift",
    "perturb",
    "project_to_simplex",
    "run",
    "run_baseline",
    "run_experiment",
    "time_fraction_near",
]


def enumerate_pure_nash(game, tol=1e-9):
    """Equilibrium report as a dict; profiles are converted to 0-based lists."""
    report = json.loads(_equilibria_json(game, tol))
    for key in ("pure_nash", "efficient"):
        report[key] = [[c - 1 for c in p] for p in report[key]]
    return report


def completion_stats(makespans):
    return json.loads(_completion_stats_json(list(makespans)))
