import logging

import numpy as np

from qgnn.graph import Graph

LOGGER = logging.getLogger(__name__)

STOCHASTIC_TOL = 1e-9


def cross_entropy_cost(predictions, g: Graph) -> float:
    """-sum over labeled s of ln Z[s, y_s]; inf when a true class has probability 0."""
    predictions = np.asarray(predictions, dtype=np.float64)
    if predictions.ndim != 2 or predictions.shape[0] != g.num_nodes:
        raise ValueError(f"Predictions of shape {predictions.shape} do not cover {g.num_nodes} nodes")
    if np.any(predictions < -STOCHASTIC_TOL) or np.any(np.abs(predictions.sum(axis=1) - 1) > STOCHASTIC_TOL):
        raise ValueError("Predictions must be row-stochastic")
    labeled = g.labeled_nodes
    if len(labeled) == 0:
        raise ValueError("Graph has no labeled nodes")
    true_probabilities = predictions[labeled, g.labels[labeled]]
    if np.any(true_probabilities <= 0):
        LOGGER.warning("Zero probability on the true class of nodes %s; cost is infinite",
                       labeled[true_probabilities <= 0].tolist())
        return float("inf")
    return float(-np.sum(np.log(true_probabilities)))
