"""Quantum message passing.

The message psi(x_i, x_j) = Sum_p w_p |p> is prepared on two registers,
U_p acts on the target node's features on branch |p>, and the message
preparation is undone. Projecting the message registers back onto |0>
leaves Sum_p |w_p|^2 U_p x_j, so complex phases of w_p never reach the
update.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from qgnn.blockenc import BlockEncoding, lcu_combine
from qgnn.encode import FEATURE_REGISTER, PQCParams, build_pqc_unitary, identity_pqc_params, random_pqc_params
from qgnn.graph import Graph, OneSparseDecomposition, one_sparse_decompose
from qgnn.models.addressing import (
    ADDRESS_REGISTERS,
    comparator_ops,
    diagonal_feature_matrix,
    feature_loading_block,
    node_perm,
    prepare_address_state,
    project_address_diagonal,
)
from qgnn.sim import (
    Circuit,
    GateOp,
    RegisterLayout,
    StateVector,
    block_diagonal,
    is_unitary,
    num_qubits_for,
    pauli_x,
    postselect_zero,
)

LOGGER = logging.getLogger(__name__)

SOURCE_REGISTER = "m2"
TARGET_REGISTER = "m3"
EDGE_REGISTER = "edge"


def default_unitary_family(n_qubits, count=None) -> List[np.ndarray]:
    """U_p = RY(pi p / count) on every wire after a cyclic shift by p."""
    dim = 1 << n_qubits
    count = count or dim
    out = []
    for p in range(count):
        shift = np.roll(np.eye(dim), p, axis=0)
        angle = np.pi * p / count
        c, s = np.cos(angle / 2), np.sin(angle / 2)
        rotation = np.array([[1.0]])
        for _ in range(n_qubits):
            rotation = np.kron(rotation, np.array([[c, -s], [s, c]]))
        out.append(rotation @ shift)
    return out


@dataclass(frozen=True, eq=False)
class MpnnConfig:
    """Message PQCs (U_a on x_i, U_b on x_j, joint PQC on both) and the U_p family."""

    source_pqc: PQCParams
    target_pqc: PQCParams
    joint_pqc: PQCParams
    unitaries: Sequence[np.ndarray] = field(default_factory=list)
    r: float = 0.0
    decomposition: Optional[OneSparseDecomposition] = None

    def __post_init__(self):
        unitaries = [np.asarray(u, dtype=complex) for u in self.unitaries]
        for p, u in enumerate(unitaries):
            if not is_unitary(u):
                raise ValueError(f"U_{p} is not unitary within tolerance")
        if len({u.shape for u in unitaries}) > 1:
            raise ValueError("All U_p must act on the same feature register")
        if not np.isfinite(self.r) or self.r < 0:
            raise ValueError(f"r must be finite and nonnegative, got {self.r}")
        object.__setattr__(self, "unitaries", unitaries)

    def message_unitaries(self, n_qubits):
        """(U_a, U_b, U_joint) as matrices."""
        return (build_pqc_unitary(self.source_pqc, n_qubits), build_pqc_unitary(self.target_pqc, n_qubits),
                build_pqc_unitary(self.joint_pqc, 2 * n_qubits))

    def family(self, n_qubits) -> List[np.ndarray]:
        """U_p for every message basis state p, padded with the identity."""
        dim = 1 << n_qubits
        count = 1 << (2 * n_qubits)
        if len(self.unitaries) > count:
            raise ValueError(f"{len(self.unitaries)} unitaries exceed the {count} message basis states")
        if self.unitaries and self.unitaries[0].shape != (dim, dim):
            raise ValueError(f"U_p of shape {self.unitaries[0].shape} do not act on {n_qubits} feature qubits")
        return list(self.unitaries) + [np.eye(dim)] * (count - len(self.unitaries))

    def support_decomposition(self, g: Graph) -> OneSparseDecomposition:
        if self.decomposition is not None:
            if self.decomposition.dim != g.num_nodes:
                raise ValueError(f"Decomposition of dimension {self.decomposition.dim} does not match the graph")
            return self.decomposition
        return one_sparse_decompose(g.adjacency())


def make_mpnn_config(g: Graph, layers=1, seed=0, identity=False, unitaries=None, r=0.0) -> MpnnConfig:
    m = num_qubits_for(g.num_features)
    if identity:
        pqcs = [identity_pqc_params(m, layers, SOURCE_REGISTER), identity_pqc_params(m, layers, TARGET_REGISTER),
                identity_pqc_params(2 * m, layers, "message")]
    else:
        pqcs = [random_pqc_params(m, layers, seed, SOURCE_REGISTER),
                random_pqc_params(m, layers, seed + 1, TARGET_REGISTER),
                random_pqc_params(2 * m, layers, seed + 2, "message")]
    family = default_unitary_family(m) if unitaries is None else unitaries
    return MpnnConfig(*pqcs, unitaries=family, r=r)


def message_layer_layout(g: Graph) -> RegisterLayout:
    n = num_qubits_for(g.num_nodes)
    m = num_qubits_for(g.num_features)
    return RegisterLayout((
        ("i", n), ("j", n), ("k", n),
        (FEATURE_REGISTER, m), (SOURCE_REGISTER, m), (TARGET_REGISTER, m), (EDGE_REGISTER, 1),
    ))


def build_message_unitary(cfg: MpnnConfig, g: Graph, layout: RegisterLayout = None) -> Circuit:
    """|i>|j>|0>|0> -> |i>|j>|psi(x_i, x_j)>, psi = U_joint (U_a x_i (x) U_b x_j) on
    normalized features."""
    layout = layout or message_layer_layout(g)
    m = layout.size(SOURCE_REGISTER)
    if g.num_features > 1 << m:
        raise ValueError(f"{g.num_features} features overflow the {m}-qubit message registers")
    u_a, u_b, u_joint = cfg.message_unitaries(m)
    circuit = Circuit(layout, name="message")
    circuit.append(GateOp(layout.qubits("i", SOURCE_REGISTER),
                          block=feature_loading_block(g.features, u_a, layout.size("i")), label="load-source"))
    circuit.append(GateOp(layout.qubits("j", TARGET_REGISTER),
                          block=feature_loading_block(g.features, u_b, layout.size("j")), label="load-target"))
    circuit.append(GateOp(layout.qubits(SOURCE_REGISTER, TARGET_REGISTER), block=u_joint, label="joint"))
    return circuit


def build_selective_lcu(cfg: MpnnConfig, layout: RegisterLayout) -> Circuit:
    """U_multi = Sum_p |p><p| (x) U_p on the feature register, applied only
    where Reg(k) = Reg(j)."""
    m = layout.size(FEATURE_REGISTER)
    family = cfg.family(m)
    compare = comparator_ops(layout, "j", "k")
    zero = layout.qubits("k")
    circuit = Circuit(layout, name="selective-lcu")
    circuit.extend(compare)
    circuit.append(GateOp(layout.qubits(SOURCE_REGISTER, TARGET_REGISTER, FEATURE_REGISTER),
                          block=block_diagonal(family), controls=zero, control_values=(0,) * len(zero),
                          label="U_multi"))
    circuit.extend(compare)
    return circuit


def selective_lcu_cascade(cfg: MpnnConfig, layout: RegisterLayout) -> Circuit:
    """One U_multi per address value, controlled on Reg(j) = Reg(k) = that value."""
    family = block_diagonal(cfg.family(layout.size(FEATURE_REGISTER)))
    n = layout.size("j")
    circuit = Circuit(layout, name="selective-lcu-cascade")
    for address in range(1 << n):
        pattern = tuple((address >> (n - 1 - b)) & 1 for b in range(n))
        circuit.append(GateOp(layout.qubits(SOURCE_REGISTER, TARGET_REGISTER, FEATURE_REGISTER), block=family,
                              controls=layout.qubits("j", "k"), control_values=pattern + pattern, label="U_multi"))
    return circuit


def message_component(l, cfg: MpnnConfig, g: Graph, layout: RegisterLayout) -> BlockEncoding:
    """Neighbour l of every node: move Reg(i) to c(j, l), flag completion
    entries, run message -> selective LCU -> message^dagger and move Reg(i) back."""
    part = cfg.support_decomposition(g).parts[l]
    n = layout.size("i")
    move = GateOp.permutation(node_perm(part.perm, n), layout.qubits("i"), label=f"O_c[{l}]")
    message = build_message_unitary(cfg, g, layout)
    circuit = Circuit(layout, name=f"message-passing[{l}]")
    circuit.append(move)
    for j, (row, value) in enumerate(zip(part.perm, part.values)):
        if value == 0:
            pattern = tuple((v >> (n - 1 - b)) & 1 for v in (int(row), j) for b in range(n))
            circuit.append(GateOp(layout.qubits(EDGE_REGISTER), block=pauli_x(), controls=layout.qubits("i", "j"),
                                  control_values=pattern, label="no-edge"))
    circuit.extend(message)
    circuit.extend(build_selective_lcu(cfg, layout))
    circuit.extend(message.inverse())
    circuit.append(move.inverse())
    return BlockEncoding(circuit, ADDRESS_REGISTERS + (FEATURE_REGISTER,),
                         (SOURCE_REGISTER, TARGET_REGISTER, EDGE_REGISTER), label=f"message[{l}]")


@dataclass
class MessagePassingResult:
    state: StateVector
    postselect_probability: float
    diagonal_probability: float
    alpha: float
    num_qubits: int

    def output_matrix(self, rows=None, cols=None) -> np.ndarray:
        return diagonal_feature_matrix(self.state, FEATURE_REGISTER)[:rows, :cols]


def apply_message_passing_layer(g: Graph, cfg: MpnnConfig) -> MessagePassingResult:
    """h_j = r x_j + Sum_l Sum_p |w_p^(c(j,l), j)|^2 U_p x_j on the address diagonal."""
    decomposition = cfg.support_decomposition(g)
    layout = message_layer_layout(g)
    components = [message_component(l, cfg, g, layout) for l in range(decomposition.num_parts)]
    coefficients = [1.0] * len(components)
    if cfg.r > 0:
        components.append(BlockEncoding(Circuit(layout, name="identity"), ADDRESS_REGISTERS + (FEATURE_REGISTER,),
                                        label="identity"))
        coefficients.append(cfg.r)
    if not components:
        raise ValueError("Graph has no edges and r = 0; the layer output would vanish")
    be = lcu_combine(components, coefficients)
    LOGGER.info("Message-passing layer: %d parts on %d qubits", decomposition.num_parts, be.layout.num_qubits)

    state = prepare_address_state(g.features, be.layout, FEATURE_REGISTER)
    state = be.circuit.run(state)
    state, probability = postselect_zero(state, be.zero_registers)
    state, diagonal = project_address_diagonal(state)
    LOGGER.info("Message-passing post-selection %.6g, diagonal projection %.6g", probability, diagonal)
    return MessagePassingResult(state, probability, diagonal, be.alpha, be.layout.num_qubits)
