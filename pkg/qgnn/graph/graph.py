import json
import logging
import os
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

LOGGER = logging.getLogger(__name__)

MAX_NODES = 64
UNLABELED = -1


class GraphFormatError(ValueError):
    """A graph file could not be parsed or failed validation."""


def _canonical_edges(edges, num_nodes) -> Tuple[Tuple[int, int], ...]:
    seen = set()
    for edge in edges:
        if len(edge) != 2:
            raise GraphFormatError(f"Edge {edge} must have exactly two endpoints")
        u, v = int(edge[0]), int(edge[1])
        if not (0 <= u < num_nodes and 0 <= v < num_nodes):
            raise GraphFormatError(f"Edge ({u}, {v}) references a node outside 0..{num_nodes - 1}")
        if u == v:
            raise GraphFormatError(f"Self-loop on node {u} is not allowed (self-loops are added by normalization)")
        seen.add((min(u, v), max(u, v)))
    return tuple(sorted(seen))


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected graph with node features and optional integer labels.

    `labels[i] == -1` marks node i as unlabeled.
    """

    num_nodes: int
    edges: Tuple[Tuple[int, int], ...]
    features: np.ndarray
    labels: Optional[np.ndarray] = None
    num_classes: int = 0
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.num_nodes < 1:
            raise GraphFormatError(f"A graph needs at least one node, got {self.num_nodes}")
        if self.num_nodes > MAX_NODES:
            raise GraphFormatError(f"Graphs are limited to {MAX_NODES} nodes, got {self.num_nodes}")
        object.__setattr__(self, "edges", _canonical_edges(self.edges, self.num_nodes))

        features = np.asarray(self.features, dtype=np.float64)
        if features.ndim == 1:
            features = features[:, None]
        if features.ndim != 2 or features.shape[0] != self.num_nodes:
            raise GraphFormatError(
                f"Feature matrix of shape {features.shape} does not have one row per node ({self.num_nodes})"
            )
        if not np.all(np.isfinite(features)):
            raise GraphFormatError("Feature matrix contains non-finite values")
        object.__setattr__(self, "features", features)

        if self.labels is not None:
            labels = np.asarray(self.labels, dtype=np.int64).reshape(-1)
            if labels.shape[0] != self.num_nodes:
                raise GraphFormatError(f"Expected {self.num_nodes} labels, got {labels.shape[0]}")
            if np.any(labels < UNLABELED):
                raise GraphFormatError(f"Labels must be class indices or {UNLABELED}, got {labels.tolist()}")
            num_classes = max(int(self.num_classes), int(labels.max()) + 1)
            object.__setattr__(self, "labels", labels)
            object.__setattr__(self, "num_classes", num_classes)

    def __repr__(self):
        return (
            f"Graph({self.name or 'unnamed'}, N={self.num_nodes}, |E|={self.num_edges}, "
            f"C={self.num_features}, classes={self.num_classes})"
        )

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def num_features(self) -> int:
        return self.features.shape[1]

    def adjacency(self) -> np.ndarray:
        adj = np.zeros((self.num_nodes, self.num_nodes))
        for u, v in self.edges:
            adj[u, v] = adj[v, u] = 1.0
        return adj

    def degrees(self) -> np.ndarray:
        return self.adjacency().sum(axis=1).astype(np.int64)

    @property
    def average_degree(self) -> float:
        return 2.0 * self.num_edges / self.num_nodes

    @property
    def max_row_nonzeros(self) -> int:
        """Nonzeros per row of the self-loop augmented adjacency (the sparsity s)."""
        return int(self.degrees().max()) + 1

    def neighbors(self, node) -> List[int]:
        adj = self.adjacency()
        return [int(v) for v in np.flatnonzero(adj[node])]

    @property
    def labeled_nodes(self) -> np.ndarray:
        if self.labels is None:
            return np.zeros(0, dtype=np.int64)
        return np.flatnonzero(self.labels != UNLABELED)

    def label_matrix(self, num_classes=None) -> np.ndarray:
        """One-hot N x F matrix; rows of unlabeled nodes are zero."""
        num_classes = num_classes or self.num_classes
        if num_classes < 1:
            raise ValueError("Graph carries no labels")
        out = np.zeros((self.num_nodes, num_classes))
        for node in self.labeled_nodes:
            out[node, self.labels[node]] = 1.0
        return out

    def with_features(self, features):
        return Graph(self.num_nodes, self.edges, features, self.labels, self.num_classes, self.name)

    def permute(self, perm: Sequence[int]):
        """Relabel node u as perm[u]."""
        perm = np.asarray(perm, dtype=np.int64)
        if not np.array_equal(np.sort(perm), np.arange(self.num_nodes)):
            raise ValueError(f"{perm.tolist()} is not a permutation of {self.num_nodes} nodes")
        features = np.empty_like(self.features)
        features[perm] = self.features
        labels = None
        if self.labels is not None:
            labels = np.empty_like(self.labels)
            labels[perm] = self.labels
        edges = [(perm[u], perm[v]) for u, v in self.edges]
        return Graph(self.num_nodes, edges, features, labels, self.num_classes, self.name)


def graph_from_dict(data, name="") -> Graph:
    try:
        nodes = sorted(data["nodes"], key=lambda node: int(node["id"]))
        edges = [tuple(edge) for edge in data.get("edges", [])]
    except (KeyError, TypeError, ValueError) as e:
        raise GraphFormatError(f"Malformed graph description: {e}")
    ids = [int(node["id"]) for node in nodes]
    if ids != list(range(len(nodes))):
        raise GraphFormatError(f"Node ids must be dense and 0-based, got {ids}")
    widths = {len(node.get("features", [])) for node in nodes}
    if len(widths) != 1:
        raise GraphFormatError(f"Feature length mismatch across nodes: {sorted(widths)}")
    features = np.array([node["features"] for node in nodes], dtype=np.float64)
    labels = None
    if any(node.get("label") is not None for node in nodes):
        labels = [UNLABELED if node.get("label") is None else int(node["label"]) for node in nodes]
    return Graph(len(nodes), edges, features, labels, int(data.get("num_classes", 0)), name)


def graph_to_dict(g: Graph) -> dict:
    nodes = []
    for i in range(g.num_nodes):
        label = None
        if g.labels is not None and g.labels[i] != UNLABELED:
            label = int(g.labels[i])
        nodes.append({"id": i, "features": [float(x) for x in g.features[i]], "label": label})
    return {"nodes": nodes, "edges": [[u, v] for u, v in g.edges], "num_classes": g.num_classes}


def _load_tsv(path, features_path=None, labels_path=None, name=""):
    features_path = features_path or os.path.splitext(path)[0] + ".csv"
    if not os.path.exists(features_path):
        raise FileNotFoundError(f"Features file {features_path} not found for edge list {path}")
    try:
        features = pd.read_csv(features_path, header=None, dtype=np.float64).to_numpy()
        if os.path.getsize(path) > 0:
            edges = pd.read_csv(path, sep="\t", header=None, comment="#", dtype=np.int64).to_numpy()
        else:
            edges = np.zeros((0, 2), dtype=np.int64)
    except (ValueError, pd.errors.ParserError) as e:
        raise GraphFormatError(f"Could not parse {path} / {features_path}: {e}")
    if edges.size and edges.shape[1] != 2:
        raise GraphFormatError(f"Edge list {path} must have two tab-separated columns")
    labels = None
    if labels_path is not None:
        column = pd.read_csv(labels_path, header=None).iloc[:, 0]
        labels = column.fillna(UNLABELED).astype(np.int64).to_numpy()
    return Graph(features.shape[0], [tuple(e) for e in edges], features, labels, name=name)


def load_graph(path, format=None, features_path=None, labels_path=None) -> Graph:
    """Load a graph from JSON, or from a TSV edge list plus a features CSV."""
    if not os.path.exists(path):
        raise FileNotFoundError(f"Graph file {path} does not exist")
    name = os.path.splitext(os.path.basename(path))[0]
    if format is None:
        format = "tsv" if path.endswith((".tsv", ".txt")) else "json"
    if format == "json":
        with open(path, "r") as f:
            try:
                data = json.load(f)
            except json.JSONDecodeError as e:
                raise GraphFormatError(f"{path} is not valid JSON: {e}")
        g = graph_from_dict(data, name=name)
    elif format == "tsv":
        g = _load_tsv(path, features_path, labels_path, name=name)
    else:
        raise ValueError(f"Unknown graph format {format}, expected json or tsv")
    LOGGER.debug("Loaded %s", g)
    return g


def make_random_graph(n, p, c, seed, num_classes=2, max_degree=None, name="") -> Graph:
    """Seeded Erdos-Renyi graph with uniform features in [0, 1) and random labels."""
    rng = np.random.default_rng(seed)
    degree = np.zeros(n, dtype=np.int64)
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                if max_degree is not None and (degree[u] >= max_degree or degree[v] >= max_degree):
                    continue
                edges.append((u, v))
                degree[u] += 1
                degree[v] += 1
    features = rng.random((n, c))
    labels = rng.integers(0, num_classes, size=n)
    return Graph(n, edges, features, labels, num_classes, name or f"random-{n}")
