import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
import torch
from scipy.special import softmax

from qgnn.blockenc import apply_polynomial_to_symmetric
from qgnn.encode import apply_activation_elementwise, pad_matrix
from qgnn.graph import Graph, graph_laplacian, normalized_adjacency, one_sparse_decompose

LOGGER = logging.getLogger(__name__)

VARIANTS = ("gcn", "sgc", "lgc", "gat", "mpnn")
CONVENTIONS = ("magnitude-squared", "signed-real")


@dataclass
class ClassicalModelConfig:
    """Dense reference settings. Weight matrices act on row features, H -> H W,
    so a PQC unitary U enters as W = U^T."""

    variant: str = "gcn"
    weights: List[np.ndarray] = field(default_factory=list)
    k: int = 2
    activation: str = "relu"
    convention: str = "magnitude-squared"
    t: int = 6
    r: float = 0.0
    include_self: bool = False
    key_unitary: Optional[np.ndarray] = None
    query_unitary: Optional[np.ndarray] = None
    unitaries: List[np.ndarray] = field(default_factory=list)
    message_unitaries: Sequence[np.ndarray] = ()

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"Unknown variant {self.variant}, expected one of {VARIANTS}")
        if self.convention not in CONVENTIONS:
            raise ValueError(f"Unknown attention convention {self.convention}")
        if not np.isfinite(self.r) or self.r < 0:
            raise ValueError(f"r must be finite and nonnegative, got {self.r}")


@dataclass
class ForwardResult:
    """Final pre-softmax matrix, its softmax and per-layer intermediates.

    `normalized_layers` follows the simulator: every propagated matrix is
    divided by its Frobenius norm before sigma and renormalized after.
    """

    output: np.ndarray
    probabilities: np.ndarray
    layers: List[np.ndarray] = field(default_factory=list)
    normalized_layers: List[np.ndarray] = field(default_factory=list)

    @property
    def normalized_output(self) -> np.ndarray:
        if self.normalized_layers:
            return self.normalized_layers[-1]
        return self.output / np.linalg.norm(self.output)

    def predictions(self) -> np.ndarray:
        return np.argmax(self.probabilities, axis=1)


def _tensor(matrix) -> torch.Tensor:
    return torch.as_tensor(np.asarray(matrix), dtype=torch.complex128)


def _numpy(tensor: torch.Tensor) -> np.ndarray:
    out = tensor.numpy()
    if np.allclose(out.imag, 0, atol=1e-14):
        return out.real.copy()
    return out


def phase_aligned_real(matrix) -> np.ndarray:
    """Real part after removing the global phase of the largest entry."""
    matrix = np.asarray(matrix)
    if not np.iscomplexobj(matrix):
        return matrix
    flat = matrix.reshape(-1)
    pivot = flat[np.argmax(np.abs(flat))]
    if pivot != 0:
        matrix = matrix * (abs(pivot) / pivot)
    return matrix.real


def row_softmax(matrix) -> np.ndarray:
    return softmax(phase_aligned_real(matrix), axis=1)


def padded_features(g: Graph, width) -> np.ndarray:
    return pad_matrix(g.features, g.num_nodes, width)


def _weight_width(weights) -> int:
    widths = {np.asarray(w).shape[0] for w in weights}
    if len(widths) != 1:
        raise ValueError(f"All weights must share one square size, got {sorted(widths)}")
    return widths.pop()


def gcn_forward(g: Graph, cfg: ClassicalModelConfig, adjacency=None) -> ForwardResult:
    """H^{l+1} = sigma(A H^l W^l), sigma skipped on the last layer."""
    if not cfg.weights:
        raise ValueError("gcn_forward needs at least one weight matrix")
    width = _weight_width(cfg.weights)
    for w in cfg.weights:
        if np.asarray(w).shape != (width, width):
            raise ValueError(f"Weight of shape {np.asarray(w).shape} is not square")
    a = _tensor(normalized_adjacency(g) if adjacency is None else adjacency)
    h = _tensor(padded_features(g, width))
    h_norm = h / torch.linalg.norm(h)
    layers, normalized = [], []
    for index, w in enumerate(cfg.weights):
        z = a @ h @ _tensor(w)
        z_norm = a @ h_norm @ _tensor(w)
        z_norm = z_norm / torch.linalg.norm(z_norm)
        layers.append(_numpy(z))
        if index < len(cfg.weights) - 1:
            h = apply_activation_elementwise(z, cfg.activation)
            h_norm = apply_activation_elementwise(z_norm, cfg.activation)
            h_norm = h_norm / torch.linalg.norm(h_norm)
        else:
            h, h_norm = z, z_norm
        normalized.append(_numpy(h_norm))
    output = _numpy(h)
    return ForwardResult(output, row_softmax(output), layers, normalized)


def sgc_forward(g: Graph, cfg: ClassicalModelConfig) -> ForwardResult:
    """S^K X Theta with Theta = cfg.weights[0]."""
    if cfg.k < 1:
        raise ValueError(f"K must be at least 1, got {cfg.k}")
    theta = cfg.weights[0]
    s = _tensor(normalized_adjacency(g))
    h = _tensor(padded_features(g, np.asarray(theta).shape[0]))
    for _ in range(cfg.k):
        h = s @ h
    output = _numpy(h @ _tensor(theta))
    return ForwardResult(output, row_softmax(output), [output])


def lgc_encoding_scale(g: Graph, variant="normalized-shifted") -> float:
    """Subnormalization of the Laplacian encoding: one unit per 1-sparse part."""
    return float(one_sparse_decompose(graph_laplacian(g, variant)).num_parts)


def lgc_filter(g: Graph, phases=None, coefficients=None, variant="normalized-shifted", scale=None,
               odd_phases=None, parity_weights=(1.0, 1.0)) -> np.ndarray:
    """Polynomial filter on the Laplacian.

    Coefficients give sum_i alpha_i L^i directly. Phases give Re P(L / scale)
    with P from the scalar QSVT reference, `scale` defaulting to the encoding
    subnormalization so the quantum and classical paths apply one matrix.
    """
    lap = graph_laplacian(g, variant)
    if (phases is None) == (coefficients is None):
        raise ValueError("Give exactly one of phases or coefficients")
    if coefficients is not None:
        coefficients = np.asarray(coefficients, dtype=np.float64)
        out = np.zeros_like(lap)
        power = np.eye(g.num_nodes)
        for alpha in coefficients:
            out += alpha * power
            power = power @ lap
        return out
    scale = lgc_encoding_scale(g, variant) if scale is None else scale
    scaled = lap / scale
    out = apply_polynomial_to_symmetric(scaled, phases)
    if odd_phases is not None:
        w_even, w_odd = parity_weights
        out = (w_even * out + w_odd * apply_polynomial_to_symmetric(scaled, odd_phases)) / (abs(w_even) + abs(w_odd))
    return out.real


def lgc_forward(g: Graph, theta, phases=None, coefficients=None, variant="normalized-shifted", scale=None,
                odd_phases=None, parity_weights=(1.0, 1.0)) -> ForwardResult:
    filt = _tensor(lgc_filter(g, phases, coefficients, variant, scale, odd_phases, parity_weights))
    h = _tensor(padded_features(g, np.asarray(theta).shape[0]))
    output = _numpy(filt @ h @ _tensor(theta))
    return ForwardResult(output, row_softmax(output), [output])


def normalized_rows(features) -> np.ndarray:
    features = np.asarray(features, dtype=np.float64)
    norms = np.linalg.norm(features, axis=1)
    if np.any(norms == 0):
        raise ValueError(f"Nodes {np.flatnonzero(norms == 0).tolist()} have all-zero features")
    return features / norms[:, None]


def round_score(value, convention, t) -> float:
    """Fixed-point value the oracle stores: t-bit magnitude, or sign plus t-1
    magnitude bits for the signed convention."""
    if convention == "magnitude-squared":
        levels = (1 << t) - 1
        return round(float(np.clip(value, 0.0, 1.0)) * levels) / levels
    levels = (1 << (t - 1)) - 1
    magnitude = round(min(abs(float(value)), 1.0) * levels) / levels
    return -magnitude if value < 0 else magnitude


def attention_scores(features, key_unitary, query_unitary, convention="magnitude-squared", t=None) -> np.ndarray:
    """a[i, j] for k_i = U_K x_i, q_j = U_Q x_j on normalized, padded features,
    rounded to t bits when `t` is given."""
    key_unitary = np.asarray(key_unitary)
    x = pad_matrix(normalized_rows(features), len(features), key_unitary.shape[0])
    keys = x @ key_unitary.T
    queries = x @ np.asarray(query_unitary).T
    overlaps = keys.conj() @ queries.T
    if convention == "magnitude-squared":
        scores = np.abs(overlaps) ** 2
    elif convention == "signed-real":
        scores = overlaps.real
    else:
        raise ValueError(f"Unknown attention convention {convention}")
    if t is not None:
        scores = np.vectorize(lambda v: round_score(v, convention, t))(scores)
    return scores


def attention_support(g: Graph, include_self=False) -> np.ndarray:
    support = g.adjacency()
    if include_self:
        support = support + np.eye(g.num_nodes)
    return support


def gat_reference_update(g: Graph, cfg: ClassicalModelConfig) -> np.ndarray:
    """x'_j = r W x_j + sum_{i in N(j)} a_t(x_i, x_j) W x_i, with W = cfg.weights[0]
    acting on row features."""
    weight = np.asarray(cfg.weights[0])
    scores = attention_scores(g.features, cfg.key_unitary, cfg.query_unitary, cfg.convention, cfg.t)
    mixing = _tensor(cfg.r * np.eye(g.num_nodes) + (scores * attention_support(g, cfg.include_self)).T)
    h = _tensor(padded_features(g, weight.shape[0]))
    return _numpy(mixing @ h @ _tensor(weight))


def message_weights(features, message_unitaries) -> np.ndarray:
    """|w_p^{ij}|^2: the Born weights of (U_joint)(U_a x_i x U_b x_j) over p."""
    u_a, u_b, u_joint = (np.asarray(u) for u in message_unitaries)
    x = pad_matrix(normalized_rows(features), len(features), u_a.shape[0])
    left = x @ u_a.T
    right = x @ u_b.T
    joint = np.einsum("ia,jb->ijab", left, right).reshape(len(features), len(features), -1)
    amplitudes = joint @ u_joint.T
    return np.abs(amplitudes) ** 2


def mpnn_reference_update(g: Graph, cfg: ClassicalModelConfig) -> np.ndarray:
    """h_j = r x_j + sum_{i in N(j)} sum_p |w_p^{ij}|^2 U_p x_j."""
    unitaries = [np.asarray(u) for u in cfg.unitaries]
    width = unitaries[0].shape[0]
    weights = message_weights(g.features, cfg.message_unitaries)
    if weights.shape[2] > len(unitaries):
        unitaries = unitaries + [np.eye(width)] * (weights.shape[2] - len(unitaries))
    x = padded_features(g, width)
    support = g.adjacency()
    out = cfg.r * x.astype(complex)
    for j in range(g.num_nodes):
        mixture = sum(weights[i, j, p] * unitaries[p] for i in np.flatnonzero(support[:, j])
                      for p in range(weights.shape[2]))
        if not np.isscalar(mixture):
            out[j] += mixture @ x[j]
    return _numpy(_tensor(out))


def mpnn_message_aggregate(g: Graph, cfg: ClassicalModelConfig) -> np.ndarray:
    """Textbook sum of message vectors psi(x_i, x_j) over neighbours, for contrast
    with the quantum-induced update (which only sees |w_p|^2)."""
    u_a, u_b, u_joint = (np.asarray(u) for u in cfg.message_unitaries)
    x = pad_matrix(normalized_rows(g.features), g.num_nodes, u_a.shape[0])
    support = g.adjacency()
    out = np.zeros((g.num_nodes, u_joint.shape[0]), dtype=complex)
    for j in range(g.num_nodes):
        for i in np.flatnonzero(support[:, j]):
            out[j] += u_joint @ np.kron(u_a @ x[i], u_b @ x[j])
    return out
