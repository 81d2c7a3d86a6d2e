"""Loop-level twins of the dense references, used to cross-check them."""

import math

import numpy as np

from qgnn.classical.gnn import ClassicalModelConfig, round_score
from qgnn.graph import Graph


def naive_normalized_adjacency(g: Graph):
    n = g.num_nodes
    degree = [1.0] * n
    for u, v in g.edges:
        degree[u] += 1
        degree[v] += 1
    out = [[0.0] * n for _ in range(n)]
    for i in range(n):
        out[i][i] = 1.0 / degree[i]
    for u, v in g.edges:
        value = 1.0 / math.sqrt(degree[u] * degree[v])
        out[u][v] = value
        out[v][u] = value
    return out


def naive_matmul(a, b):
    rows, inner, cols = len(a), len(b), len(b[0])
    out = [[0j] * cols for _ in range(rows)]
    for i in range(rows):
        for j in range(cols):
            acc = 0j
            for k in range(inner):
                acc += a[i][k] * b[k][j]
            out[i][j] = acc
    return out


def _rows(matrix):
    return [[complex(x) for x in row] for row in np.asarray(matrix)]


def _padded(g: Graph, width):
    return [[complex(g.features[i][k]) if k < g.num_features else 0j for k in range(width)]
            for i in range(g.num_nodes)]


def _activation(value, name):
    if name == "none":
        return value
    fn = (lambda x: max(x, 0.0)) if name == "relu" else math.tanh
    return complex(fn(value.real), fn(value.imag))


def naive_gcn_forward(g: Graph, cfg: ClassicalModelConfig) -> np.ndarray:
    a = naive_normalized_adjacency(g)
    h = _padded(g, len(cfg.weights[0]))
    for index, w in enumerate(cfg.weights):
        h = naive_matmul(naive_matmul(a, h), _rows(w))
        if index < len(cfg.weights) - 1:
            h = [[_activation(x, cfg.activation) for x in row] for row in h]
    return np.array(h)


def naive_sgc_forward(g: Graph, cfg: ClassicalModelConfig) -> np.ndarray:
    a = naive_normalized_adjacency(g)
    h = _padded(g, len(cfg.weights[0]))
    for _ in range(cfg.k):
        h = naive_matmul(a, h)
    return np.array(naive_matmul(h, _rows(cfg.weights[0])))


def naive_lgc_forward(g: Graph, theta, coefficients, laplacian) -> np.ndarray:
    n = g.num_nodes
    lap = _rows(laplacian)
    power = [[1.0 + 0j if i == j else 0j for j in range(n)] for i in range(n)]
    filt = [[0j] * n for _ in range(n)]
    for alpha in coefficients:
        for i in range(n):
            for j in range(n):
                filt[i][j] += alpha * power[i][j]
        power = naive_matmul(power, lap)
    h = _padded(g, len(theta))
    return np.array(naive_matmul(naive_matmul(filt, h), _rows(theta)))


def naive_gat_update(g: Graph, cfg: ClassicalModelConfig) -> np.ndarray:
    weight = _rows(cfg.weights[0])
    width = len(weight)
    x = _padded(g, width)
    unit = []
    for i in range(g.num_nodes):
        norm = math.sqrt(sum(abs(v) ** 2 for v in x[i]))
        unit.append([v / norm for v in x[i]])
    key_u, query_u = _rows(cfg.key_unitary), _rows(cfg.query_unitary)
    keys = [[sum(key_u[a][b] * unit[i][b] for b in range(width)) for a in range(width)] for i in range(g.num_nodes)]
    queries = [[sum(query_u[a][b] * unit[i][b] for b in range(width)) for a in range(width)]
               for i in range(g.num_nodes)]
    neighbours = {j: set() for j in range(g.num_nodes)}
    for u, v in g.edges:
        neighbours[u].add(v)
        neighbours[v].add(u)
    if cfg.include_self:
        for j in range(g.num_nodes):
            neighbours[j].add(j)
    transformed = naive_matmul(x, weight)
    out = []
    for j in range(g.num_nodes):
        row = [cfg.r * transformed[j][k] for k in range(width)]
        for i in sorted(neighbours[j]):
            overlap = sum(keys[i][a].conjugate() * queries[j][a] for a in range(width))
            raw = abs(overlap) ** 2 if cfg.convention == "magnitude-squared" else overlap.real
            score = round_score(raw, cfg.convention, cfg.t)
            for k in range(width):
                row[k] += score * transformed[i][k]
        out.append(row)
    return np.array(out)


def naive_mpnn_update(g: Graph, cfg: ClassicalModelConfig) -> np.ndarray:
    u_a, u_b, u_joint = (_rows(u) for u in cfg.message_unitaries)
    width = len(u_a)
    x = _padded(g, width)
    unit = []
    for i in range(g.num_nodes):
        norm = math.sqrt(sum(abs(v) ** 2 for v in x[i]))
        unit.append([v / norm for v in x[i]])
    unitaries = [_rows(u) for u in cfg.unitaries]
    out = [[cfg.r * v for v in x[j]] for j in range(g.num_nodes)]
    for u, v in g.edges:
        for i, j in ((u, v), (v, u)):
            left = [sum(u_a[a][b] * unit[i][b] for b in range(width)) for a in range(width)]
            right = [sum(u_b[a][b] * unit[j][b] for b in range(width)) for a in range(width)]
            product = [left[a] * right[b] for a in range(width) for b in range(width)]
            amplitudes = [sum(u_joint[p][q] * product[q] for q in range(len(product))) for p in range(len(product))]
            for p, w in enumerate(amplitudes):
                unitary = unitaries[p] if p < len(unitaries) else None
                for k in range(width):
                    moved = x[j][k] if unitary is None else sum(unitary[k][m] * x[j][m] for m in range(width))
                    out[j][k] += abs(w) ** 2 * moved
    return np.array(out)
