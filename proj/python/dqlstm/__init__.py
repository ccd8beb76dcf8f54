"""Quantum LSTM with differentiable quantum architecture search."""

import json

from ._core import (
    ConfigError,
    NumericError,
    __version__,
    baseline_configs,
    bessel_j2,
    block_forward,
    circuit_jacobian,
    default_config,
    enumerate_space,
    load_checkpoint,
    make_series,
    narma,
    qnn_forward,
    save_checkpoint,
)
from ._core import evaluate as _evaluate
from ._core import train as _train

__all__ = [
    "ConfigError",
    "NumericError",
    "__version__",
    "baseline_configs",
    "bessel_j2",
    "block_forward",
    "circuit_jacobian",
    "config",
    "default_config",
    "enumerate_space",
    "evaluate",
    "load_checkpoint",
    "make_series",
    "narma",
    "qnn_forward",
    "save_checkpoint",
    "train",
]


def config(**overrides):
    """Default config as a dict, with top-level keys replaced by `overrides`."""
    c = json.loads(default_config())
    for key, value in overrides.items():
        if key not in c:
            raise ConfigError(f"unknown config key '{key}'")
        if key == "data":
            c["data"].update(value)
        else:
            c[key] = value
    return c


def train(cfg=None, on_epoch=None, **overrides):
    """Train a model. `cfg` is a dict from config(); keyword arguments override it."""
    c = dict(cfg) if cfg is not None else config()
    c.update(config(**overrides) if overrides else {})
    return _train(json.dumps(c), on_epoch)


def evaluate(checkpoint_json, task=""):
    return _evaluate(checkpoint_json, task)
