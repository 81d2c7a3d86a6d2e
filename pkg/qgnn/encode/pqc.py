import logging
from dataclasses import dataclass, replace
from typing import Tuple

import numpy as np

from qgnn.sim import Circuit, GateOp, RegisterLayout
from qgnn.sim.gates import MAX_BLOCK_QUBITS

LOGGER = logging.getLogger(__name__)

ANSATZ = "ry-rz-ring"


def ring_pairs(n_qubits):
    """Entangling pairs of one layer: nothing for one qubit, a single pair for two."""
    if n_qubits < 2:
        return []
    if n_qubits == 2:
        return [(0, 1)]
    return [(w, (w + 1) % n_qubits) for w in range(n_qubits)]


def angles_per_layer(n_qubits):
    return 2 * n_qubits + len(ring_pairs(n_qubits))


def num_angles(n_qubits, layers):
    return layers * angles_per_layer(n_qubits)


@dataclass(frozen=True, eq=False)
class PQCParams:
    """Layered circuit: per layer RY on every wire, RZ on every wire, then RZZ
    on the ring. Angles are stored layer-major as [ry..., rz..., zz...]."""

    layers: int
    angles: np.ndarray
    register: str = "feature"
    ansatz: str = ANSATZ

    def __post_init__(self):
        angles = np.asarray(self.angles, dtype=np.float64).reshape(-1)
        if self.layers < 0:
            raise ValueError(f"Layer count must be nonnegative, got {self.layers}")
        if self.ansatz != ANSATZ:
            raise ValueError(f"Unknown ansatz {self.ansatz}, only {ANSATZ} is available")
        if not np.all(np.isfinite(angles)):
            raise ValueError("PQC angles must be finite")
        object.__setattr__(self, "angles", angles)

    def with_angles(self, angles):
        return replace(self, angles=np.asarray(angles, dtype=np.float64).copy())

    def num_qubits(self) -> int:
        """Register width implied by the angle count (ambiguous for zero layers)."""
        if self.layers == 0:
            return 0
        per_layer = len(self.angles) // self.layers
        for n in range(1, MAX_BLOCK_QUBITS + 1):
            if angles_per_layer(n) == per_layer:
                return n
        raise ValueError(f"{len(self.angles)} angles do not fit {self.layers} layers of {ANSATZ}")


def identity_pqc_params(n_qubits, layers=1, register="feature") -> PQCParams:
    return PQCParams(layers, np.zeros(num_angles(n_qubits, layers)), register)


def random_pqc_params(n_qubits, layers=1, seed=None, register="feature", scale=np.pi) -> PQCParams:
    rng = np.random.default_rng(seed)
    return PQCParams(layers, rng.uniform(-scale, scale, num_angles(n_qubits, layers)), register)


def _on_wire(gate, wire, n_qubits):
    return np.kron(np.kron(np.eye(1 << wire), gate), np.eye(1 << (n_qubits - wire - 1)))


def _z_signs(wire, n_qubits):
    index = np.arange(1 << n_qubits)
    return 1 - 2 * ((index >> (n_qubits - 1 - wire)) & 1)


def build_pqc_unitary(params: PQCParams, n_qubits) -> np.ndarray:
    if not 1 <= n_qubits <= MAX_BLOCK_QUBITS:
        raise ValueError(f"PQC width must be between 1 and {MAX_BLOCK_QUBITS} qubits, got {n_qubits}")
    expected = num_angles(n_qubits, params.layers)
    if len(params.angles) != expected:
        raise ValueError(
            f"{params.ansatz} with {params.layers} layers on {n_qubits} qubits needs {expected} angles, "
            f"got {len(params.angles)}"
        )
    pairs = ring_pairs(n_qubits)
    unitary = np.eye(1 << n_qubits, dtype=complex)
    for layer in params.angles.reshape(params.layers, -1) if params.layers else []:
        ry_angles, rz_angles, zz_angles = np.split(layer, [n_qubits, 2 * n_qubits])
        for wire, theta in enumerate(ry_angles):
            c, s = np.cos(theta / 2), np.sin(theta / 2)
            unitary = _on_wire(np.array([[c, -s], [s, c]]), wire, n_qubits) @ unitary
        for wire, theta in enumerate(rz_angles):
            gate = np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])
            unitary = _on_wire(gate, wire, n_qubits) @ unitary
        for (a, b), theta in zip(pairs, zz_angles):
            phases = np.exp(-0.5j * theta * _z_signs(a, n_qubits) * _z_signs(b, n_qubits))
            unitary = phases[:, None] * unitary
    return unitary


def pqc_weight_matrix(params: PQCParams, n_qubits) -> np.ndarray:
    """Classical weight W realised by the PQC: the amplitude matrix maps H -> H U^T."""
    return build_pqc_unitary(params, n_qubits).T


def pqc_circuit(params: PQCParams, layout: RegisterLayout, register=None) -> Circuit:
    register = register or params.register
    n_qubits = layout.size(register)
    block = build_pqc_unitary(params, n_qubits)
    op = GateOp(layout.qubits(register), block=block, label=f"pqc[{register}]")
    return Circuit(layout, [op], name=f"pqc[{register}]")
