import numpy as np

from qgnn.graph.graph import Graph

LAPLACIAN_VARIANTS = ("normalized-shifted", "normalized-halved")


def normalized_adjacency(g: Graph) -> np.ndarray:
    """D^-1/2 (A + I) D^-1/2 with D the degree matrix of A + I."""
    adj = g.adjacency() + np.eye(g.num_nodes)
    inv_sqrt = 1.0 / np.sqrt(adj.sum(axis=1))
    return adj * inv_sqrt[:, None] * inv_sqrt[None, :]


def laplacian_scale(g: Graph, variant="normalized-shifted") -> float:
    if variant == "normalized-shifted":
        return max(1.0, float(np.linalg.norm(np.eye(g.num_nodes) - normalized_adjacency(g), 2)))
    if variant == "normalized-halved":
        return 2.0
    raise ValueError(f"Unknown Laplacian variant {variant}, expected one of {LAPLACIAN_VARIANTS}")


def graph_laplacian(g: Graph, variant="normalized-shifted") -> np.ndarray:
    """(I - A_hat) divided by `laplacian_scale`, so the spectral norm is at most 1."""
    scale = laplacian_scale(g, variant)
    lap = np.eye(g.num_nodes) - normalized_adjacency(g)
    return lap / scale


def graph_matrix(g: Graph, kind="adjacency", variant="normalized-shifted") -> np.ndarray:
    if kind == "adjacency":
        return normalized_adjacency(g)
    if kind == "laplacian":
        return graph_laplacian(g, variant)
    raise ValueError(f"Unknown graph matrix {kind}")
