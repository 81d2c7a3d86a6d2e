import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
import torch

from qgnn.blockenc import BlockEncoding, lcu_combine
from qgnn.blockenc.one_sparse import angle_table_perm, controlled_rotation_block
from qgnn.classical import CONVENTIONS, attention_support, normalized_rows
from qgnn.encode import (
    FEATURE_REGISTER,
    PQCParams,
    build_pqc_unitary,
    identity_pqc_params,
    pad_matrix,
    pqc_circuit,
    random_pqc_params,
)
from qgnn.graph import Graph, OneSparseDecomposition, one_sparse_decompose
from qgnn.models.addressing import (
    ADDRESS_REGISTERS,
    comparator_ops,
    diagonal_feature_matrix,
    feature_loading_block,
    inverse_perm,
    node_perm,
    prepare_address_state,
    project_address_diagonal,
)
from qgnn.sim import (
    Circuit,
    GateOp,
    RegisterLayout,
    StateVector,
    bits_of,
    hadamard,
    num_qubits_for,
    pauli_x,
    pauli_z,
    postselect_zero,
    swap_perm,
)

LOGGER = logging.getLogger(__name__)

MODES = ("idealized-qpe", "full-circuit-qpe")
MIN_VALUE_BITS = 2
MAX_VALUE_BITS = 8

KEY_REGISTER = "key"
QUERY_REGISTER = "query"
SWAP_REGISTER = "swap"
PHASE_REGISTER = "phase"
VALUE_REGISTER = "m1"
COPY_REGISTER = "m2"
ROTATION_REGISTER = "rot"


@dataclass(frozen=True, eq=False)
class AttentionOracleConfig:
    """Key/query PQCs and the fixed-point storage of the attention score.

    With the magnitude-squared convention the stored value is
    |<k_i|q_j>|^2 on t bits; the signed-real convention stores Re<k_i|q_j>
    as a sign bit plus t-1 magnitude bits.
    """

    key: PQCParams
    query: PQCParams
    t: int = 6
    mode: str = "idealized-qpe"
    convention: str = "magnitude-squared"

    def __post_init__(self):
        if not MIN_VALUE_BITS <= self.t <= MAX_VALUE_BITS:
            raise ValueError(f"t must lie in [{MIN_VALUE_BITS}, {MAX_VALUE_BITS}], got {self.t}")
        if self.mode not in MODES:
            raise ValueError(f"Unknown oracle mode {self.mode}, expected one of {MODES}")
        if self.convention not in CONVENTIONS:
            raise ValueError(f"Unknown attention convention {self.convention}, expected one of {CONVENTIONS}")

    @property
    def signed(self) -> bool:
        return self.convention == "signed-real"

    def unitaries(self, n_qubits) -> Tuple[np.ndarray, np.ndarray]:
        return build_pqc_unitary(self.key, n_qubits), build_pqc_unitary(self.query, n_qubits)


def make_attention_config(g: Graph, t=6, seed=0, layers=1, mode="idealized-qpe", convention="magnitude-squared",
                          identity=False) -> AttentionOracleConfig:
    m = num_qubits_for(g.num_features)
    if identity:
        key, query = identity_pqc_params(m, layers, KEY_REGISTER), identity_pqc_params(m, layers, QUERY_REGISTER)
    else:
        key = random_pqc_params(m, layers, seed, KEY_REGISTER)
        query = random_pqc_params(m, layers, seed + 1, QUERY_REGISTER)
    return AttentionOracleConfig(key, query, t, mode, convention)


@dataclass(frozen=True)
class AttentionScoreRecord:
    i: int
    j: int
    overlap: complex
    theta: float
    value: float
    code: int


def value_code(value, convention, t) -> int:
    """Fixed-point code of an attention score (same rounding as classical.round_score)."""
    if convention == "magnitude-squared":
        return int(round(float(np.clip(value, 0.0, 1.0)) * ((1 << t) - 1)))
    magnitude = int(round(min(abs(float(value)), 1.0) * ((1 << (t - 1)) - 1)))
    sign = 1 if value < 0 and magnitude else 0
    return (sign << (t - 1)) | magnitude


def code_value(code, convention, t) -> float:
    if convention == "magnitude-squared":
        return code / ((1 << t) - 1)
    magnitude = (code & ((1 << (t - 1)) - 1)) / ((1 << (t - 1)) - 1)
    return -magnitude if code >> (t - 1) else magnitude


def oracle_core_layout(g: Graph, convention="magnitude-squared") -> RegisterLayout:
    n = num_qubits_for(g.num_nodes)
    m = num_qubits_for(g.num_features)
    registers = [("i", n), ("j", n), (KEY_REGISTER, m)]
    if convention == "magnitude-squared":
        registers.append((QUERY_REGISTER, m))
    registers.append((SWAP_REGISTER, 1))
    return RegisterLayout(tuple(registers))


def build_swap_test_unitary(cfg: AttentionOracleConfig, g: Graph, layout: RegisterLayout = None) -> Circuit:
    """U = Sum_ij |i><i| x |j><j| x U_ij, where U_ij|0> = sin(theta)|0>|u> + cos(theta)|1>|v>
    on the swap ancilla. The signed convention replaces the swap test by a
    Hadamard test between k_i and q_j on the key register alone."""
    layout = layout or oracle_core_layout(g, cfg.convention)
    m = layout.size(KEY_REGISTER)
    if g.num_features > 1 << m:
        raise ValueError(f"{g.num_features} features overflow the {m}-qubit key register")
    n_i, n_j = layout.size("i"), layout.size("j")
    key_u, query_u = cfg.unitaries(m)
    key_load = feature_loading_block(g.features, key_u, n_i)
    query_load = feature_loading_block(g.features, query_u, n_j)
    swap = layout.qubits(SWAP_REGISTER)
    key = layout.qubits(KEY_REGISTER)

    circuit = Circuit(layout, name="swap-test")
    if cfg.signed:
        circuit.append(GateOp(swap, block=hadamard(), label="H"))
        circuit.append(GateOp(layout.qubits("i") + key, block=key_load, controls=swap, control_values=(0,),
                              label="load-key"))
        circuit.append(GateOp(layout.qubits("j") + key, block=query_load, controls=swap, control_values=(1,),
                              label="load-query"))
        circuit.append(GateOp(swap, block=hadamard(), label="H"))
        return circuit
    query = layout.qubits(QUERY_REGISTER)
    circuit.append(GateOp(layout.qubits("i") + key, block=key_load, label="load-key"))
    circuit.append(GateOp(layout.qubits("j") + query, block=query_load, label="load-query"))
    circuit.append(GateOp(swap, block=hadamard(), label="H"))
    circuit.append(GateOp.permutation(swap_perm(m), key + query, controls=swap, label="c-swap"))
    circuit.append(GateOp(swap, block=hadamard(), label="H"))
    return circuit


def swap_zero_probabilities(u: Circuit, g: Graph) -> np.ndarray:
    """P(swap = 0) for every node pair, from U applied to |i>|j>|0>."""
    layout = u.layout
    n = g.num_nodes
    idx = [int(layout.basis_indices([], {"i": i, "j": j})[0]) for i in range(n) for j in range(n)]
    psi = torch.zeros((layout.dim, len(idx)), dtype=torch.complex128)
    psi[torch.as_tensor(idx), torch.arange(len(idx))] = 1
    out = u.run_batch(psi)
    shift = layout.num_qubits - layout.offset(SWAP_REGISTER) - 1
    zero = torch.as_tensor(((np.arange(layout.dim) >> shift) & 1) == 0)
    probabilities = torch.sum(torch.abs(out[zero]) ** 2, dim=0).numpy()
    return probabilities.reshape(n, n)


def exact_overlaps(cfg: AttentionOracleConfig, g: Graph) -> np.ndarray:
    """<k_i|q_j> computed directly from the PQC matrices."""
    m = num_qubits_for(g.num_features)
    key_u, query_u = cfg.unitaries(m)
    x = pad_matrix(normalized_rows(g.features), g.num_nodes, 1 << m)
    return (x @ key_u.T).conj() @ (x @ query_u.T).T


def attention_score_records(cfg: AttentionOracleConfig, g: Graph) -> Dict[Tuple[int, int], AttentionScoreRecord]:
    """theta_ij read off the simulated swap test; the score is -cos(2 theta)."""
    p_zero = np.clip(swap_zero_probabilities(build_swap_test_unitary(cfg, g), g), 0.0, 1.0)
    overlaps = exact_overlaps(cfg, g)
    records = {}
    for i in range(g.num_nodes):
        for j in range(g.num_nodes):
            theta = float(np.arcsin(np.sqrt(p_zero[i, j])))
            code = value_code(-np.cos(2 * theta), cfg.convention, cfg.t)
            records[i, j] = AttentionScoreRecord(i, j, complex(overlaps[i, j]), theta,
                                                 code_value(code, cfg.convention, cfg.t), code)
    return records


def build_grover_operator(u: Circuit) -> Circuit:
    """G = U C2 U^dagger C1: C1 is Z on the swap ancilla, C2 flips the sign of
    the all-zero work state."""
    layout = u.layout
    swap = layout.qubits(SWAP_REGISTER)
    zero_controls = [w for name in (KEY_REGISTER, QUERY_REGISTER) if name in layout for w in layout.qubits(name)]
    grover = Circuit(layout, name="grover")
    grover.append(GateOp(swap, block=pauli_z(), label="C1"))
    grover.extend(u.inverse())
    grover.append(GateOp(swap, block=np.diag([-1.0, 1.0]), controls=zero_controls,
                         control_values=(0,) * len(zero_controls), label="C2"))
    grover.extend(u)
    return grover


def grover_eigenphases(cfg: AttentionOracleConfig, g: Graph, i, j) -> np.ndarray:
    """(-2 theta_ij, 2 theta_ij), from the spectrum of G restricted to the
    plane spanned by the good and bad components of U|0>."""
    u = build_swap_test_unitary(cfg, g)
    grover = build_grover_operator(u)
    work = [SWAP_REGISTER] + [name for name in (KEY_REGISTER, QUERY_REGISTER) if name in u.layout]
    fixed = {"i": i, "j": j}
    g_ij = grover.restricted_unitary(work, fixed).numpy()
    start = u.restricted_unitary(work, fixed).numpy()[:, 0]
    half = len(start) // 2
    good = np.concatenate([start[:half], np.zeros(half)])
    bad = start - good
    basis = [v / np.linalg.norm(v) for v in (good, bad) if np.linalg.norm(v) > 1e-12]
    plane = np.stack(basis, axis=1)
    phases = np.angle(np.linalg.eigvals(plane.conj().T @ g_ij @ plane))
    phi = float(np.max(np.abs(phases)))
    return np.array([-phi, phi])


def qft_matrix(t) -> np.ndarray:
    dim = 1 << t
    a = np.arange(dim)
    return np.exp(2j * np.pi * np.outer(a, a) / dim) / math.sqrt(dim)


def phase_estimation_circuit(u: Circuit, t) -> Circuit:
    """QPE of the Grover operator on the phase register; the most significant
    phase wire controls G^(2^(t-1))."""
    layout = u.layout
    phase = layout.qubits(PHASE_REGISTER)
    grover = build_grover_operator(u)
    circuit = Circuit(layout, name="qpe")
    for wire in phase:
        circuit.append(GateOp([wire], block=hadamard(), label="H"))
    for bit, wire in enumerate(phase):
        step = grover.controlled([wire])
        for _ in range(1 << (t - 1 - bit)):
            circuit.extend(step)
    circuit.append(GateOp(phase, block=qft_matrix(t).conj().T, label="QFT^-1"))
    return circuit


def score_from_phase_perm(convention, t) -> np.ndarray:
    """U_O on (phase, value): |y>|v> -> |y>|v XOR code(-cos(2 pi y / 2^t))>."""
    codes = [value_code(-math.cos(2 * math.pi * y / (1 << t)), convention, t) for y in range(1 << t)]
    return angle_table_perm(codes, t)


def _check_phase_resolution(records, t):
    seen = {}
    for record in records.values():
        outcome = int(round(record.theta / math.pi * (1 << t))) % (1 << t)
        if seen.setdefault(outcome, record.code) != record.code:
            raise ValueError(
                f"t={t} phase bits cannot separate the attention scores; increase t or use idealized-qpe"
            )


@dataclass(frozen=True, eq=False)
class AttentionOracle:
    """Built attention oracle: |i>|j>|0> -> |i>|j>|a_ij> on the value register."""

    config: AttentionOracleConfig
    circuit: Circuit
    records: Dict[Tuple[int, int], AttentionScoreRecord]
    work_registers: Tuple[str, ...]
    value_register: str = VALUE_REGISTER

    def values(self, num_nodes) -> np.ndarray:
        return np.array([[self.records[i, j].value for j in range(num_nodes)] for i in range(num_nodes)])

    def compact_circuit(self) -> Circuit:
        """The net basis action as one table permutation on (Reg(i), Reg(j), value)."""
        layout = self.circuit.layout
        codes = score_codes(self.records, layout.size("i")).reshape(-1)
        op = GateOp.permutation(angle_table_perm(codes, self.config.t), layout.qubits("i", "j", self.value_register),
                                label="store-score")
        return Circuit(layout, [op], name="attention-oracle[compact]")


def score_codes(records, address_qubits) -> np.ndarray:
    dim = 1 << address_qubits
    codes = np.zeros((dim, dim), dtype=np.int64)
    for (i, j), record in records.items():
        codes[i, j] = record.code
    return codes


def run_attention_oracle(cfg: AttentionOracleConfig, g: Graph) -> AttentionOracle:
    """Compute the score into the swap ancilla amplitude, store it in the value
    register, then uncompute every work register."""
    core = oracle_core_layout(g, cfg.convention)
    registers = list(core.registers)
    if cfg.mode == "full-circuit-qpe":
        registers.append((PHASE_REGISTER, cfg.t))
    registers.append((VALUE_REGISTER, cfg.t))
    layout = RegisterLayout(tuple(registers))
    records = attention_score_records(cfg, g)
    u = build_swap_test_unitary(cfg, g, layout)

    circuit = Circuit(layout, name=f"attention-oracle[{cfg.mode}]")
    circuit.extend(u)
    value = layout.qubits(VALUE_REGISTER)
    if cfg.mode == "idealized-qpe":
        codes = score_codes(records, layout.size("i")).reshape(-1)
        circuit.append(GateOp.permutation(angle_table_perm(codes, cfg.t), layout.qubits("i", "j") + value,
                                          label="store-score"))
    else:
        _check_phase_resolution(records, cfg.t)
        qpe = phase_estimation_circuit(u, cfg.t)
        circuit.extend(qpe)
        circuit.append(GateOp.permutation(score_from_phase_perm(cfg.convention, cfg.t),
                                          layout.qubits(PHASE_REGISTER) + value, label="U_O"))
        circuit.extend(qpe.inverse())
    circuit.extend(u.inverse())
    work = tuple(name for name in layout.names if name not in ("i", "j", VALUE_REGISTER))
    LOGGER.info("Attention oracle (%s, t=%d) on %d qubits, %d gates", cfg.mode, cfg.t, layout.num_qubits,
                len(circuit))
    return AttentionOracle(cfg, circuit, records, work)


def oracle_outcomes(oracle: AttentionOracle, g: Graph) -> Dict[Tuple[int, int], Tuple[int, float, float]]:
    """Per pair: (modal value code, its probability, probability that every
    work register is back in |0>)."""
    layout = oracle.circuit.layout
    out = {}
    for i in range(g.num_nodes):
        for j in range(g.num_nodes):
            start = layout.basis_indices([], {"i": i, "j": j})[0]
            psi = torch.zeros((layout.dim, 1), dtype=torch.complex128)
            psi[int(start), 0] = 1
            state = StateVector(layout, oracle.circuit.run_batch(psi).reshape(-1))
            values = state.marginal([oracle.value_register])
            clean = float(state.marginal(list(oracle.work_registers))[0]) if oracle.work_registers else 1.0
            out[i, j] = (int(np.argmax(values)), float(np.max(values)), clean)
    return out


def build_selective_copy(addr_width, value_width, registers=("j", "k", VALUE_REGISTER, COPY_REGISTER)) -> Circuit:
    """Copy the value register into the empty copy register on branches where
    the two addresses agree: compare, copy controlled on a zero difference,
    un-compare."""
    if addr_width < 1 or value_width < 1:
        raise ValueError(f"Register widths must be positive, got {addr_width} and {value_width}")
    source, target, value, copy = registers
    layout = RegisterLayout(((source, addr_width), (target, addr_width), (value, value_width), (copy, value_width)))
    compare = comparator_ops(layout, source, target)
    zero = layout.qubits(target)
    circuit = Circuit(layout, name="selective-copy")
    circuit.extend(compare)
    for b in range(value_width):
        circuit.append(GateOp([(copy, b)], block=pauli_x(), controls=zero + [(value, b)],
                              control_values=(0,) * addr_width + (1,), label="copy"))
    circuit.extend(compare)
    return circuit


def selective_copy_cascade(addr_width, value_width, registers=("j", "k", VALUE_REGISTER, COPY_REGISTER)) -> Circuit:
    """One multi-controlled copy per address value."""
    source, target, value, copy = registers
    layout = RegisterLayout(((source, addr_width), (target, addr_width), (value, value_width), (copy, value_width)))
    circuit = Circuit(layout, name="selective-copy-cascade")
    for address in range(1 << addr_width):
        pattern = bits_of(address, addr_width)
        controls = layout.qubits(source) + layout.qubits(target)
        for b in range(value_width):
            circuit.append(GateOp([(copy, b)], block=pauli_x(), controls=controls + [(value, b)],
                                  control_values=pattern + pattern + (1,), label="copy"))
    return circuit


@dataclass(frozen=True, eq=False)
class GatLayerConfig:
    feature_pqc: PQCParams
    r: float = 0.0
    include_self: bool = False
    decomposition: Optional[OneSparseDecomposition] = None

    def __post_init__(self):
        if not np.isfinite(self.r) or self.r < 0:
            raise ValueError(f"r must be finite and nonnegative, got {self.r}")

    def support_decomposition(self, g: Graph) -> OneSparseDecomposition:
        if self.decomposition is not None:
            if self.decomposition.dim != g.num_nodes:
                raise ValueError(f"Decomposition of dimension {self.decomposition.dim} does not match the graph")
            return self.decomposition
        return one_sparse_decompose(attention_support(g, self.include_self))

    def lcu_width(self, g: Graph) -> int:
        branches = self.support_decomposition(g).num_parts + (1 if self.r > 0 else 0)
        return num_qubits_for(max(branches, 1))


def make_gat_layer_config(g: Graph, seed=0, layers=1, r=0.0, include_self=False, identity=False) -> GatLayerConfig:
    m = num_qubits_for(g.num_features)
    pqc = identity_pqc_params(m, layers) if identity else random_pqc_params(m, layers, seed)
    return GatLayerConfig(pqc, r, include_self)


def attention_layer_layout(g: Graph, t) -> RegisterLayout:
    n = num_qubits_for(g.num_nodes)
    return RegisterLayout((
        ("i", n), ("j", n), ("k", n),
        (FEATURE_REGISTER, num_qubits_for(g.num_features)),
        (VALUE_REGISTER, t), (COPY_REGISTER, t), (ROTATION_REGISTER, 1),
    ))


def part_score_codes(part, records, address_qubits) -> np.ndarray:
    """Stored codes for the entries (c(j), j) of one part; completion entries hold 0."""
    codes = np.zeros((1 << address_qubits, 1 << address_qubits), dtype=np.int64)
    for j, (row, value) in enumerate(zip(part.perm, part.values)):
        if value != 0:
            codes[row, j] = records[int(row), j].code
    return codes


def build_o_diagonal(l, cfg: GatLayerConfig, att: AttentionOracleConfig, g: Graph, layout: RegisterLayout = None,
                     records=None) -> Circuit:
    """|j>|j>|j>|0> -> |j>|j>|j>|a(x_c(j,l), x_j)> on the copy register.

    O_c moves Reg(i) to c(j, l), the stored scores are looked up and copied
    where Reg(k) = Reg(j), the lookup is erased and Reg(i) moved back.
    """
    decomposition = cfg.support_decomposition(g)
    if not 0 <= l < decomposition.num_parts:
        raise ValueError(f"Part {l} does not exist; the decomposition has {decomposition.num_parts} parts")
    layout = layout or attention_layer_layout(g, att.t)
    records = records if records is not None else attention_score_records(att, g)
    part = decomposition.parts[l]
    n = layout.size("i")
    move = GateOp.permutation(node_perm(part.perm, n), layout.qubits("i"), label=f"O_c[{l}]")
    codes = part_score_codes(part, records, n).reshape(-1)
    lookup = GateOp.permutation(angle_table_perm(codes, att.t), layout.qubits("i", "j", VALUE_REGISTER),
                                label=f"score[{l}]")

    circuit = Circuit(layout, name=f"o-diagonal[{l}]")
    circuit.append(move)
    circuit.append(lookup)
    circuit.extend(build_selective_copy(n, att.t).remap(layout))
    circuit.append(lookup.inverse())
    circuit.append(move.inverse())
    return circuit


def conditional_rotation_encode(layout: RegisterLayout, value_register=COPY_REGISTER,
                                rotation_register=ROTATION_REGISTER, convention="magnitude-squared", t=6) -> Circuit:
    """|v>|0> -> |v>(a_v|0> + sqrt(1 - a_v^2)|1>) with a_v the decoded score."""
    if layout.size(value_register) != t:
        raise ValueError(f"Value register {value_register} has {layout.size(value_register)} qubits, expected {t}")
    code_values = {code: code_value(code, convention, t) for code in range(1 << t)}
    op = GateOp(layout.qubits(value_register, rotation_register), block=controlled_rotation_block(code_values, t),
                label="CR")
    return Circuit(layout, [op], name="conditional-rotation")


def attention_component(l, cfg: GatLayerConfig, att: AttentionOracleConfig, g: Graph, layout: RegisterLayout,
                        records) -> BlockEncoding:
    """M_l: move every address to c^-1, encode the score into the rotation
    ancilla and uncompute the stored value."""
    part = cfg.support_decomposition(g).parts[l]
    back = inverse_perm(node_perm(part.perm, layout.size("i")))
    circuit = Circuit(layout, name=f"M[{l}]")
    for name in ADDRESS_REGISTERS:
        circuit.append(GateOp.permutation(back, layout.qubits(name), label=f"P[{l}]"))
    o_diag = build_o_diagonal(l, cfg, att, g, layout, records)
    circuit.extend(o_diag)
    circuit.extend(conditional_rotation_encode(layout, COPY_REGISTER, ROTATION_REGISTER, att.convention, att.t))
    circuit.extend(o_diag.inverse())
    return BlockEncoding(circuit, ADDRESS_REGISTERS + (FEATURE_REGISTER,), (ROTATION_REGISTER,),
                         (VALUE_REGISTER, COPY_REGISTER), label=f"M[{l}]")


@dataclass
class AttentionLayerResult:
    state: StateVector
    postselect_probability: float
    diagonal_probability: float
    alpha: float
    num_qubits: int
    records: Dict[Tuple[int, int], AttentionScoreRecord] = field(default_factory=dict)

    def output_matrix(self, rows=None, cols=None) -> np.ndarray:
        return diagonal_feature_matrix(self.state, FEATURE_REGISTER)[:rows, :cols]


def apply_graph_attention_layer(g: Graph, cfg: GatLayerConfig, att: AttentionOracleConfig) -> AttentionLayerResult:
    """x'_j = r U_w x_j + Sum_l a(x_c(j,l), x_j) U_w x_c(j,l), read from the
    address-diagonal branch after post-selecting every ancilla on zero."""
    decomposition = cfg.support_decomposition(g)
    layout = attention_layer_layout(g, att.t)
    records = attention_score_records(att, g)
    components: List[BlockEncoding] = [
        attention_component(l, cfg, att, g, layout, records) for l in range(decomposition.num_parts)
    ]
    coefficients = [1.0] * len(components)
    if cfg.r > 0:
        components.append(BlockEncoding(Circuit(layout, name="identity"), ADDRESS_REGISTERS + (FEATURE_REGISTER,),
                                        label="identity"))
        coefficients.append(cfg.r)
    if not components:
        raise ValueError("Graph has no attention support and r = 0; the layer output would vanish")
    be = lcu_combine(components, coefficients)
    LOGGER.info("Attention layer: %d parts, r=%g, %d qubits", decomposition.num_parts, cfg.r, be.layout.num_qubits)

    state = prepare_address_state(g.features, be.layout, FEATURE_REGISTER)
    state = pqc_circuit(cfg.feature_pqc, be.layout, FEATURE_REGISTER).run(state)
    state = be.circuit.run(state)
    state, probability = postselect_zero(state, be.zero_registers)
    state, diagonal = project_address_diagonal(state)
    LOGGER.info("Attention layer post-selection %.6g, diagonal projection %.6g", probability, diagonal)
    return AttentionLayerResult(state, probability, diagonal, be.alpha, be.layout.num_qubits, records)
