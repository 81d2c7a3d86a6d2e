import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
from tqdm import tqdm

from qgnn.blockenc import (
    BlockEncoding,
    QSVTSequence,
    decomposition_block_encoding,
    fresh_register_name,
    mixed_parity_qsvt,
    power_block_encoding,
    qsvt_transform,
)
from qgnn.classical import row_softmax
from qgnn.encode import (
    FEATURE_REGISTER,
    NODE_REGISTER,
    PQCParams,
    apply_idealized_activation,
    identity_pqc_params,
    pad_matrix,
    pqc_circuit,
    prepare_feature_state,
    random_pqc_params,
)
from qgnn.graph import Graph, graph_laplacian, normalized_adjacency, one_sparse_decompose
from qgnn.sim import (
    Circuit,
    GateOp,
    RegisterLayout,
    StateVector,
    hadamard,
    num_qubits_for,
    postselect_zero,
    sample_measurement,
    state_inner_product,
    state_preparation_circuit,
)

LOGGER = logging.getLogger(__name__)


@dataclass
class QgcnConfig:
    """Settings shared by the GCN, SGC and LGC pipelines.

    `weights` holds one PQC per layer for the GCN and a single Theta for
    SGC / LGC.
    """

    k: int = 2
    weights: List[PQCParams] = field(default_factory=list)
    activation: str = "relu"
    shots: Optional[int] = None
    epsilon: float = 0.1
    delta: float = 0.05
    seed: int = 0
    laplacian_variant: str = "normalized-shifted"

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"K must be at least 1, got {self.k}")
        if self.shots is not None and self.shots < 1:
            raise ValueError(f"shots must be at least 1, got {self.shots}")
        if not (0 < self.epsilon < 1 and 0 < self.delta < 1):
            raise ValueError(f"epsilon and delta must lie in (0, 1), got {self.epsilon}, {self.delta}")


@dataclass
class PipelineResult:
    """Post-selected output of a pipeline and the probability of reaching it."""

    state: StateVector
    postselect_probability: float
    alpha: float
    num_qubits: int

    def output_matrix(self, rows=None, cols=None) -> np.ndarray:
        """Zero-branch amplitude matrix, cut to rows x cols."""
        matrix = self.state.amplitude_matrix(NODE_REGISTER, FEATURE_REGISTER).numpy()
        return matrix[:rows, :cols]


def feature_qubits(g: Graph) -> int:
    """Feature register width holding both C inputs and F_K classes."""
    return num_qubits_for(max(g.num_features, g.num_classes, 1))


def make_qgcn_config(g: Graph, num_weights=1, layers=1, seed=0, identity=False, **kwargs) -> QgcnConfig:
    n = feature_qubits(g)
    if identity:
        weights = [identity_pqc_params(n, layers) for _ in range(num_weights)]
    else:
        weights = [random_pqc_params(n, layers, seed=seed + i) for i in range(num_weights)]
    return QgcnConfig(weights=weights, seed=seed, **kwargs)


def adjacency_block_encoding(g: Graph) -> BlockEncoding:
    return decomposition_block_encoding(one_sparse_decompose(normalized_adjacency(g)), NODE_REGISTER)


def laplacian_block_encoding(g: Graph, variant="normalized-shifted") -> BlockEncoding:
    return decomposition_block_encoding(one_sparse_decompose(graph_laplacian(g, variant)), NODE_REGISTER)


def pipeline_layout(be: BlockEncoding, g: Graph) -> RegisterLayout:
    return be.layout.with_register(FEATURE_REGISTER, feature_qubits(g))


def _ancillas_clear(state: StateVector, registers: Sequence[str], tol=1e-12) -> bool:
    if not registers:
        return True
    return float(state.marginal(list(registers))[0]) >= 1 - tol


def apply_graph_convolution_layer(state: StateVector, be_a: BlockEncoding, w: PQCParams) -> StateVector:
    """(U_A x U_W) on the full state. The ancilla-zero branch holds
    vec((A H W)^T) / alpha with W = U^T; nothing is post-selected here."""
    if not _ancillas_clear(state, be_a.zero_registers):
        raise ValueError(f"Ancilla registers {list(be_a.zero_registers)} are not in |0> on input")
    circuit = be_a.circuit.remap(state.layout)
    circuit.extend(pqc_circuit(w, state.layout, FEATURE_REGISTER))
    return circuit.run(state)


def _log_layout(layout: RegisterLayout, label):
    LOGGER.info("%s: %d qubits over registers %s", label, layout.num_qubits, layout.names)


def run_qgcn(g: Graph, cfg: QgcnConfig, be_a: BlockEncoding = None) -> PipelineResult:
    """Layer-wise QGCN: block-encoding + PQC, post-selection and the
    idealized activation between layers (none after the last)."""
    if not cfg.weights:
        raise ValueError("run_qgcn needs one PQC per layer")
    be_a = be_a or adjacency_block_encoding(g)
    layout = pipeline_layout(be_a, g)
    _log_layout(layout, "qgcn")
    state = prepare_feature_state(g.features, layout)
    probability = 1.0
    for layer, w in enumerate(cfg.weights):
        state = apply_graph_convolution_layer(state, be_a, w)
        state, p = postselect_zero(state, be_a.zero_registers)
        probability *= p
        LOGGER.debug("Layer %d post-selection probability %.6f", layer, p)
        if layer < len(cfg.weights) - 1:
            state = apply_idealized_activation(state, cfg.activation)
    return PipelineResult(state, probability, be_a.alpha, layout.num_qubits)


def run_two_layer_qgcn(g: Graph, cfg: QgcnConfig) -> PipelineResult:
    if len(cfg.weights) != 2:
        raise ValueError(f"The two-layer model needs exactly two PQCs, got {len(cfg.weights)}")
    return run_qgcn(g, cfg)


def _run_encoded_filter(g: Graph, be: BlockEncoding, theta: PQCParams, label) -> PipelineResult:
    layout = pipeline_layout(be, g)
    _log_layout(layout, label)
    state = prepare_feature_state(g.features, layout)
    state = apply_graph_convolution_layer(state, be, theta)
    state, probability = postselect_zero(state, be.zero_registers)
    LOGGER.info("%s post-selection probability %.6g", label, probability)
    return PipelineResult(state, probability, be.alpha, layout.num_qubits)


def run_quantum_sgc(g: Graph, cfg: QgcnConfig) -> PipelineResult:
    """S^K X Theta with S^K encoded as a K-fold product."""
    if not cfg.weights:
        raise ValueError("run_quantum_sgc needs the Theta PQC")
    be_s = power_block_encoding(adjacency_block_encoding(g), cfg.k)
    return _run_encoded_filter(g, be_s, cfg.weights[0], f"sgc[K={cfg.k}]")


def lgc_block_encoding(g: Graph, phases, variant="normalized-shifted", odd_phases=None,
                       parity_weights=(1.0, 1.0)) -> BlockEncoding:
    be_l = laplacian_block_encoding(g, variant)
    if odd_phases is None:
        return qsvt_transform(QSVTSequence(phases, be_l))
    return mixed_parity_qsvt(be_l, phases, odd_phases, parity_weights)


def run_quantum_lgc(g: Graph, phases, theta: PQCParams, variant="normalized-shifted", odd_phases=None,
                    parity_weights=(1.0, 1.0)) -> PipelineResult:
    """P(L / alpha_L) X Theta, with P induced by the QSVT phases."""
    be = lgc_block_encoding(g, phases, variant, odd_phases, parity_weights)
    return _run_encoded_filter(g, be, theta, f"lgc[deg={len(phases) - 1}]")


def prepare_label_state(g: Graph, layout: RegisterLayout = None) -> StateVector:
    """vec(Y^T) over the labeled nodes, normalized."""
    if len(g.labeled_nodes) == 0:
        raise ValueError("Graph has no labeled nodes")
    layout = layout or RegisterLayout(((NODE_REGISTER, num_qubits_for(g.num_nodes)),
                                       (FEATURE_REGISTER, feature_qubits(g))))
    rows = 1 << layout.size(NODE_REGISTER)
    cols = 1 << layout.size(FEATURE_REGISTER)
    return StateVector.from_register_amplitudes(layout, [NODE_REGISTER, FEATURE_REGISTER],
                                                pad_matrix(g.label_matrix(), rows, cols))


def output_register_state(state: StateVector) -> StateVector:
    """The (node, feature) part of a post-selected state."""
    return state.reduced([NODE_REGISTER, FEATURE_REGISTER])


def inner_product_cost(output: StateVector, label_state: StateVector) -> float:
    """-Re <psi_out | psi_Y> on the node/feature registers."""
    return -state_inner_product(output_register_state(output), label_state).real


def hadamard_shots(epsilon, delta) -> int:
    return int(math.ceil(2.0 * math.log(2.0 / delta) / epsilon ** 2))


def hadamard_test_circuit(u1: Circuit, u2: Circuit) -> Circuit:
    """H, U1 on control |0>, U2 on control |1>, H. P(0) = (1 + Re<psi1|psi2>) / 2."""
    if u1.layout != u2.layout:
        raise ValueError(f"Circuits act on different layouts: {u1.layout.registers} vs {u2.layout.registers}")
    control = fresh_register_name("hadamard", set(u1.layout.names))
    layout = u1.layout.with_register(control, 1)
    wire = layout.qubits(control)
    circuit = Circuit(layout, name="hadamard-test")
    circuit.append(GateOp(wire, block=hadamard(), label="H"))
    circuit.extend(u1.remap(layout).controlled(wire, (0,)))
    circuit.extend(u2.remap(layout).controlled(wire, (1,)))
    circuit.append(GateOp(wire, block=hadamard(), label="H"))
    return circuit


def estimate_cost_hadamard(u1: Circuit, u2: Circuit, epsilon, delta, seed, shots=None) -> float:
    """Sampled -Re<psi1|psi2> for psi_i = U_i|0>, with the Hoeffding shot count by default."""
    shots = shots or hadamard_shots(epsilon, delta)
    circuit = hadamard_test_circuit(u1, u2)
    state = circuit.run(StateVector.from_register_amplitudes(circuit.layout, [], [1.0]))
    control = circuit.layout.names[-1]
    counts = sample_measurement(state, [control], shots, seed)
    p_zero = counts.get(0, 0) / shots
    return -(2.0 * p_zero - 1.0)


def exact_cost(u1: Circuit, u2: Circuit) -> float:
    start = StateVector.from_register_amplitudes(u1.layout, [], [1.0])
    return -state_inner_product(u1.run(start), u2.run(start)).real


def state_circuit(state: StateVector) -> Circuit:
    """Emulated preparation of `state` from |0...0> on its own layout."""
    return state_preparation_circuit(state.layout, state.layout.names, state.amplitudes.numpy(), name="load")


def infer_node_labels(state: StateVector, g: Graph, num_classes=None) -> np.ndarray:
    """Row-wise softmax of the real amplitudes (global phase removed); argmax
    with ties going to the lowest class index."""
    num_classes = num_classes or g.num_classes or g.num_features
    matrix = state.amplitude_matrix(NODE_REGISTER, FEATURE_REGISTER).numpy()[: g.num_nodes, :num_classes]
    return labels_from_matrix(matrix)


def labels_from_matrix(matrix) -> np.ndarray:
    return np.argmax(row_softmax(matrix), axis=1)


def propagated_state(g: Graph, k: int) -> StateVector:
    """Normalized S^K X on (node, feature), the PQC-free part of the SGC."""
    be_s = power_block_encoding(adjacency_block_encoding(g), k)
    layout = pipeline_layout(be_s, g)
    state = be_s.circuit.remap(layout).run(prepare_feature_state(g.features, layout))
    state, _ = postselect_zero(state, be_s.zero_registers)
    return output_register_state(state)


def train_finite_difference(g: Graph, cfg: QgcnConfig, epochs, learning_rate, mode="exact", step=1e-3,
                            layers=1, progress=False):
    """Gradient descent on the SGC Theta with central finite differences.

    Returns the trained PQCParams and the cost before training followed by
    the cost after every epoch.
    """
    if epochs < 0:
        raise ValueError(f"epochs must be nonnegative, got {epochs}")
    if mode not in ("exact", "sampled"):
        raise ValueError(f"Unknown training mode {mode}")
    n = feature_qubits(g)
    params = cfg.weights[0] if cfg.weights else random_pqc_params(n, layers, seed=cfg.seed)
    source = propagated_state(g, cfg.k)
    target = prepare_label_state(g, source.layout)
    rng = np.random.default_rng(cfg.seed)

    def cost(angles):
        circuit = pqc_circuit(params.with_angles(angles), source.layout, FEATURE_REGISTER)
        if mode == "exact":
            value = -state_inner_product(circuit.run(source), target).real
        else:
            u1 = state_circuit(source)
            u1.extend(circuit)
            value = estimate_cost_hadamard(u1, state_circuit(target), cfg.epsilon, cfg.delta,
                                           int(rng.integers(2 ** 31)), cfg.shots)
        if not np.isfinite(value):
            raise RuntimeError(f"Non-finite cost {value} during training")
        return value

    angles = params.angles.copy()
    trace = [cost(angles)]
    for epoch in tqdm(range(epochs), desc="train", disable=not progress):
        grad = np.zeros_like(angles)
        for index in range(len(angles)):
            shift = np.zeros_like(angles)
            shift[index] = step
            grad[index] = (cost(angles + shift) - cost(angles - shift)) / (2 * step)
        angles = angles - learning_rate * grad
        trace.append(cost(angles))
        LOGGER.debug("Epoch %d cost %.8f", epoch, trace[-1])
    return params.with_angles(angles), trace
