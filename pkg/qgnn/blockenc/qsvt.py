import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import torch

from qgnn.blockenc.block_encoding import BlockEncoding, extract_encoded_block, fresh_register_name
from qgnn.blockenc.lcu import lcu_combine
from qgnn.sim import Circuit, GateOp, hadamard, pauli_x

LOGGER = logging.getLogger(__name__)

MAX_QSVT_DEGREE = 8
SYMMETRY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class QSVTSequence:
    """K + 1 reflection phases (phi_0 ... phi_K) around a Hermitian block-encoding."""

    phases: np.ndarray
    encoding: BlockEncoding
    parity: Optional[int] = None

    def __post_init__(self):
        phases = np.asarray(self.phases, dtype=np.float64).reshape(-1)
        if len(phases) < 1:
            raise ValueError("QSVT needs at least one phase")
        if not np.all(np.isfinite(phases)):
            raise ValueError(f"QSVT phases must be finite, got {phases.tolist()}")
        object.__setattr__(self, "phases", phases)
        if self.parity is not None and self.parity != self.degree % 2:
            raise ValueError(f"Parity {self.parity} does not match degree {self.degree}")
        object.__setattr__(self, "parity", self.degree % 2)

    @property
    def degree(self) -> int:
        return len(self.phases) - 1


def _signal_matrix(lam):
    comp = np.sqrt(max(0.0, 1.0 - lam * lam))
    return np.array([[lam, comp], [comp, -lam]], dtype=complex)


def _phase_z(phi):
    return np.diag([np.exp(1j * phi), np.exp(-1j * phi)])


def reference_qsvt_scalar(phases: Sequence[float], lam: float) -> float:
    """P(lambda) = Re[(e^{i phi_0 Z} prod_k R(lambda) e^{i phi_k Z})_00]."""
    if abs(lam) > 1 + 1e-12:
        raise ValueError(f"Scalar input must lie in [-1, 1], got {lam}")
    lam = float(np.clip(lam, -1.0, 1.0))
    phases = np.asarray(phases, dtype=np.float64).reshape(-1)
    out = _phase_z(phases[0])
    for phi in phases[1:]:
        out = out @ _signal_matrix(lam) @ _phase_z(phi)
    return float(out[0, 0].real)


def qsvt_polynomial(phases):
    return np.vectorize(lambda lam: reference_qsvt_scalar(phases, lam))


def apply_polynomial_to_symmetric(matrix, phases) -> np.ndarray:
    """V P(Lambda) V^T for a real symmetric matrix."""
    matrix = np.asarray(matrix)
    eigvals, eigvecs = np.linalg.eigh((matrix + matrix.conj().T) / 2)
    values = qsvt_polynomial(phases)(np.clip(eigvals.real, -1.0, 1.0))
    return (eigvecs * values[None, :]) @ eigvecs.conj().T


def _check_symmetric(be: BlockEncoding):
    block = extract_encoded_block(be)
    asym = float(torch.max(torch.abs(block - block.conj().T)))
    if asym > SYMMETRY_TOL:
        raise ValueError(f"QSVT needs a symmetric encoded block, asymmetry {asym:.3e}")


def qsvt_transform(sequence: QSVTSequence, check_symmetric=True) -> BlockEncoding:
    """Encoding of Re P(A / alpha) with P induced by the phases.

    Phase rotations e^{i phi (2 Pi - I)} about the all-zero ancilla
    projector are marked on a signal qubit; a sign qubit in |+> runs phases
    +phi and -phi together so post-selecting it on |0> keeps the real part.
    """
    be = sequence.encoding
    if sequence.degree > MAX_QSVT_DEGREE:
        raise ValueError(f"QSVT degree {sequence.degree} exceeds the desk-scale limit of {MAX_QSVT_DEGREE}")
    if check_symmetric:
        _check_symmetric(be)

    taken = set(be.layout.names)
    signal = fresh_register_name("qsvt", taken)
    taken.add(signal)
    sign = fresh_register_name("qsvt_sign", taken)
    layout = be.layout.with_register(signal, 1).with_register(sign, 1)
    unitary = be.circuit.remap(layout)
    adjoint = unitary.inverse()

    projector_wires = layout.qubits(*be.zero_registers)
    if not projector_wires:
        raise ValueError("QSVT needs an encoding with at least one ancilla register")
    signal_wire = layout.qubits(signal)
    sign_wire = layout.qubits(sign)
    mark = GateOp(signal_wire, block=pauli_x(), controls=projector_wires,
                  control_values=(0,) * len(projector_wires), label="mark")

    def phase_rotation(phi):
        # index = 2 * sign + signal
        phases = [np.exp(1j * phi * (1 if s == 0 else -1) * (2 * g - 1)) for s in (0, 1) for g in (0, 1)]
        ops = [GateOp(sign_wire + signal_wire, block=np.diag(phases), label=f"phase({phi:.4f})")]
        return [mark] + ops + [mark]

    circuit = Circuit(layout, name=f"qsvt[{sequence.degree}]")
    circuit.append(GateOp(sign_wire, block=hadamard(), label="H"))
    phases = sequence.phases
    circuit.extend(phase_rotation(phases[-1]))
    for step, phi in enumerate(phases[-2::-1], start=1):
        circuit.extend(unitary if step % 2 == 1 else adjoint)
        circuit.extend(phase_rotation(phi))
    circuit.append(GateOp(sign_wire, block=hadamard(), label="H"))

    LOGGER.debug("QSVT degree %d on %d qubits, %d ops", sequence.degree, layout.num_qubits, len(circuit))
    return BlockEncoding(circuit, be.data_registers, be.ancilla_registers + (sign,),
                         be.workspace_registers + (signal,), alpha=1.0,
                         epsilon=sequence.degree * be.epsilon / be.alpha, label=f"qsvt[{sequence.degree}]")


def mixed_parity_qsvt(encoding: BlockEncoding, even_phases, odd_phases, weights=(1.0, 1.0)) -> BlockEncoding:
    """LCU of an even and an odd QSVT circuit: (w_e P_e + w_o P_o) / (|w_e| + |w_o|)."""
    even = QSVTSequence(even_phases, encoding)
    odd = QSVTSequence(odd_phases, encoding)
    if even.parity != 0 or odd.parity != 1:
        raise ValueError(f"Expected an even and an odd phase list, got degrees {even.degree} and {odd.degree}")
    _check_symmetric(encoding)
    parts = [qsvt_transform(even, check_symmetric=False), qsvt_transform(odd, check_symmetric=False)]
    return lcu_combine(parts, weights)
