import json
import logging
import os

import numpy as np

from qgnn.graph import Graph, load_graph

LOGGER = logging.getLogger(__name__)

FIXTURE_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "fixtures")
FIXTURES = ("path-2", "triangle", "star-4", "random-8")
GOLDENS = "goldens.json"
GOLDEN_KEYS = (
    "normalized_adjacency",
    "propagated_k1",
    "propagated_k2",
    "sgc_k2",
    "gcn_two_layer",
    "lgc",
    "gat",
    "mpnn",
)

# Settings the stored outputs were produced with. The feature unitaries are single-qubit
# ry-rz-ring PQCs given as [ry, rz] angles.
GOLDEN_SETTINGS = {
    "weight_angles": (np.pi / 2, 0.0),
    "second_weight_angles": (np.pi / 3, 0.0),
    "lgc_phases": (0.3, -0.4, 0.2),
    "lgc_variant": "normalized-halved",
    "gat_key_angles": (np.pi / 3, np.pi / 5),
    "gat_bits": 4,
    "residual": 0.5,
    "gat_convention": "signed-real",
    "mpnn_source_angles": (np.pi / 2, 0.0),
}


def fixture_path(name):
    return os.path.join(FIXTURE_DIR, f"{name}.json")


def load_fixture(name) -> Graph:
    """One of the bundled graphs."""
    if name not in FIXTURES:
        raise ValueError(f"Unknown fixture {name}, expected one of {FIXTURES}")
    return load_graph(fixture_path(name), format="json")


def load_all_fixtures():
    return {name: load_fixture(name) for name in FIXTURES}


def load_goldens():
    """Stored classical outputs per fixture, keyed as in GOLDEN_KEYS."""
    path = os.path.join(FIXTURE_DIR, GOLDENS)
    with open(path, "r") as f:
        data = json.load(f)
    return {name: {key: np.asarray(value) for key, value in entry.items()} for name, entry in data.items()}
