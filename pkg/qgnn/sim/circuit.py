import logging
from typing import Iterable, List, Mapping, Sequence

import numpy as np
import torch

from qgnn.sim.gates import DTYPE, GateOp
from qgnn.sim.register import RegisterLayout, Wire
from qgnn.sim.statevector import StateVector, apply_op

LOGGER = logging.getLogger(__name__)


class Circuit:
    """An ordered gate list over a fixed register layout."""

    def __init__(self, layout: RegisterLayout, ops: Iterable[GateOp] = (), name=""):
        self.layout = layout
        self.name = name
        self.ops: List[GateOp] = []
        for op in ops:
            self.append(op)

    def __len__(self):
        return len(self.ops)

    def __repr__(self):
        return f"Circuit({self.name or 'unnamed'}, qubits={self.layout.num_qubits}, ops={len(self.ops)})"

    def append(self, op: GateOp):
        for wire in op.wires:
            self.layout.index(wire)
        self.ops.append(op)
        return self

    def extend(self, other):
        ops = other.ops if isinstance(other, Circuit) else other
        for op in ops:
            self.append(op)
        return self

    def copy(self, name=None):
        out = Circuit(self.layout, name=self.name if name is None else name)
        out.ops = list(self.ops)
        return out

    def inverse(self):
        out = Circuit(self.layout, name=f"{self.name}^-1")
        out.ops = [op.inverse() for op in reversed(self.ops)]
        return out

    def controlled(self, wires: Sequence[Wire], values: Sequence[int] = ()):
        out = Circuit(self.layout, name=f"c-{self.name}")
        out.ops = [op.controlled(wires, values) for op in self.ops]
        for wire in wires:
            self.layout.index(wire)
        return out

    def remap(self, layout: RegisterLayout, rename: Mapping[str, str] = None):
        """Re-express the circuit on `layout`, renaming registers through `rename`."""
        rename = dict(rename or {})
        out = Circuit(layout, name=self.name)
        for op in self.ops:
            out.append(op.renamed(rename) if rename else op)
        return out

    def run_batch(self, psi: torch.Tensor) -> torch.Tensor:
        for op in self.ops:
            psi = apply_op(psi, self.layout, op)
        return psi

    def run(self, state: StateVector) -> StateVector:
        if state.layout != self.layout:
            raise ValueError(f"State layout {state.layout.registers} does not match circuit {self.layout.registers}")
        psi = self.run_batch(state.amplitudes.reshape(-1, 1))
        return StateVector(self.layout, psi.reshape(-1))

    def unitary(self) -> torch.Tensor:
        """Dense matrix of the whole circuit (desk-scale layouts only)."""
        return self.run_batch(torch.eye(self.layout.dim, dtype=DTYPE))

    def restricted_unitary(self, registers: Sequence[str], fixed=None) -> torch.Tensor:
        """Matrix of the circuit between basis states of `registers`, with every
        other register pinned to `fixed` (default 0) on input and output."""
        idx = torch.as_tensor(self.layout.basis_indices(registers, fixed))
        psi = torch.zeros((self.layout.dim, len(idx)), dtype=DTYPE)
        psi[idx, torch.arange(len(idx))] = 1
        return self.run_batch(psi)[idx]


def state_preparation_block(vector) -> np.ndarray:
    """Unitary whose first column is `vector` (normalized), completed by QR."""
    vector = np.asarray(vector, dtype=complex).reshape(-1)
    norm = np.linalg.norm(vector)
    if norm == 0:
        raise ValueError("Cannot prepare the zero vector")
    vector = vector / norm
    dim = len(vector)
    basis = np.eye(dim, dtype=complex)
    basis[:, 0] = vector
    q, r = np.linalg.qr(basis, mode="complete")
    q[:, 0] = q[:, 0] * r[0, 0]
    if np.linalg.norm(q[:, 0] - vector) > 1e-12:
        raise RuntimeError("QR completion failed to reproduce the requested state")
    return q


def state_preparation_circuit(layout: RegisterLayout, registers: Sequence[str], vector, name="prepare"):
    wires = layout.qubits(*registers)
    block = state_preparation_block(vector)
    return Circuit(layout, [GateOp(wires, block=block, label=name)], name=name)
