# Copyright 2026 The clustask Authors
# SPDX-License-Identifier: Apache-2.0
"""Python bindings for the clustask simulator."""

from ._core import (
    ConfigError,
    ScenarioConfig,
    aggregate,
    dump_scenario,
    place_nodes,
    run_experiment,
    seed_for,
    similarity,
    simulate,
)

__all__ = [
    "ConfigError",
    "ScenarioConfig",
    "aggregate",
    "dump_scenario",
    "place_nodes",
    "run_experiment",
    "seed_for",
    "similarity",
    "simulate",
]
