# Copyright 2026 The rydhm Authors
# SPDX-License-Identifier: Apache-2.0
"""Hybrid-model Rydberg gas simulator."""

import json

from ._core import (
    DriveParams,
    Error,
    LevelScheme,
    ValidationError,
    __version__,
    deviation_map,
    exact_steady_state,
    pair_steady_state,
    preset_names,
    single_steady_state,
)
from . import _core


def preset(name):
    """Preset configuration as a dict."""
    return json.loads(_core.preset(name))


def _dump(config):
    return config if isinstance(config, str) else json.dumps(config)


def validate_config(config):
    """Normalized copy of a config (dict or JSON string); raises ValidationError."""
    return json.loads(_core.validate_config(_dump(config)))


def run_point(config, delta):
    """Ensemble observables for one detuning."""
    return _core.run_point(_dump(config), float(delta))


def run_experiment(config):
    """Runs the full scan of a config; returns {file name: CSV text}."""
    return _core.run_experiment(_dump(config))


__all__ = [
    "DriveParams",
    "Error",
    "LevelScheme",
    "ValidationError",
    "__version__",
    "deviation_map",
    "exact_steady_state",
    "pair_steady_state",
    "preset",
    "preset_names",
    "run_experiment",
    "run_point",
    "single_steady_state",
    "validate_config",
]
