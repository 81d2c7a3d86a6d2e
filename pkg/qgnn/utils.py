import copy
import logging
import os

import yaml

LOGGER = logging.getLogger(__name__)


def seed_everything(seed):
    import random
    import numpy as np
    import torch

    random.seed(seed)
    os.environ["PYTHONHASHSEED"] = str(seed)
    np.random.seed(seed)
    torch.manual_seed(seed)


def deep_merge(base, override):
    """Recursive dict merge; values in `override` win, nested dicts are merged."""
    out = copy.deepcopy(base)
    for key, value in (override or {}).items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = deep_merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def load_config(path):
    if not os.path.exists(path):
        raise FileNotFoundError(f"Config file {path} does not exist")
    with open(path, "r") as f:
        config = yaml.load(f, Loader=yaml.FullLoader)
    LOGGER.info("Loaded config %s", path)
    if config is None:
        return {}
    if not isinstance(config, dict):
        raise ValueError(f"Config file {path} must hold a mapping, got {type(config).__name__}")
    return config


def default_qgnn_config():
    return {
        "seed": 0,
        "mode": "exact",
        "graph": {
            "fixture": "path-2",
            "path": None,
            "format": None,
            "features_path": None,
            "labels_path": None,
        },
        "model": {
            "k": 2,
            "layers": 2,
            "pqc_layers": 1,
            "identity_weights": False,
            "activation": "relu",
            "laplacian_variant": "normalized-shifted",
            "phases": [0.3, -0.4, 0.2],
            "r": 0.5,
            "include_self": False,
        },
        "oracle": {
            "t": 4,
            "mode": "idealized-qpe",
            "convention": "magnitude-squared",
        },
        "training": {
            "epochs": 5,
            "learning_rate": 0.1,
            "step": 1e-3,
            "epsilon": 0.1,
            "delta": 0.05,
            "shots": None,
        },
        "estimate": {
            "preset": "sgc-large",
            "model": "sgc",
        },
        "output": {
            "path": None,
            "format": "json",
        },
        "tolerance": {
            "fidelity": 1e-9,
        },
    }
