import logging
from typing import Dict, Mapping, Sequence

import numpy as np
import torch
from einops import rearrange

from qgnn.sim.gates import DTYPE, GateOp
from qgnn.sim.register import RegisterLayout

LOGGER = logging.getLogger(__name__)

NORM_TOL = 1e-12
POSTSELECT_MIN_PROBABILITY = 1e-14


class PostSelectionError(RuntimeError):
    """The requested all-zero ancilla outcome has (numerically) zero probability."""


def apply_op(psi: torch.Tensor, layout: RegisterLayout, op: GateOp) -> torch.Tensor:
    """Apply `op` to a batch of statevectors of shape (2^n, batch)."""
    n = layout.num_qubits
    batch = psi.shape[-1]
    targets = layout.indices(op.targets)
    controls = layout.indices(op.controls)
    k, c = len(targets), len(controls)
    rest = [w for w in range(n) if w not in targets and w not in controls]
    perm = rest + controls + targets + [n]

    view = psi.reshape([2] * n + [batch]).permute(perm)
    view = view.reshape(-1, 1 << c, 1 << k, batch).clone()
    sel = int("".join(str(v) for v in op.control_values), 2) if c else 0
    chunk = view[:, sel]
    if op.block is not None:
        view[:, sel] = torch.einsum("ij,rjb->rib", op.block, chunk)
    else:
        inverse = np.empty_like(op.perm)
        inverse[op.perm] = np.arange(len(op.perm))
        view[:, sel] = chunk[:, torch.as_tensor(inverse)]

    view = view.reshape([2] * n + [batch])
    inv = [0] * (n + 1)
    for i, p in enumerate(perm):
        inv[p] = i
    return view.permute(inv).reshape(1 << n, batch)


class StateVector:
    """Amplitudes over a `RegisterLayout` (big-endian, registers in layout order)."""

    def __init__(self, layout: RegisterLayout, amplitudes):
        amplitudes = torch.as_tensor(amplitudes, dtype=DTYPE).reshape(-1)
        if amplitudes.shape[0] != layout.dim:
            raise ValueError(
                f"Expected {layout.dim} amplitudes for {layout.num_qubits} qubits, got {amplitudes.shape[0]}"
            )
        self.layout = layout
        self.amplitudes = amplitudes

    def __repr__(self):
        return f"StateVector({self.layout.registers}, norm={self.norm():.6f})"

    @classmethod
    def from_register_amplitudes(cls, layout: RegisterLayout, registers: Sequence[str], amplitudes,
                                 normalize=True):
        """State with `amplitudes` (shape 2^|r1| x 2^|r2| x ...) on `registers`, every
        other register in |0>."""
        values = torch.as_tensor(np.asarray(amplitudes), dtype=DTYPE).reshape(-1)
        idx = layout.basis_indices(registers)
        if values.shape[0] != len(idx):
            raise ValueError(f"Expected {len(idx)} register amplitudes, got {values.shape[0]}")
        if normalize:
            norm = torch.linalg.norm(values)
            if norm == 0:
                raise ValueError("Cannot build a state from an all-zero amplitude array")
            values = values / norm
        psi = torch.zeros(layout.dim, dtype=DTYPE)
        psi[torch.as_tensor(idx)] = values
        return cls(layout, psi)

    def copy(self):
        return StateVector(self.layout, self.amplitudes.clone())

    def norm(self) -> float:
        return float(torch.linalg.norm(self.amplitudes))

    def normalized(self):
        norm = self.norm()
        if norm == 0:
            raise ValueError("Cannot normalize the zero vector")
        return StateVector(self.layout, self.amplitudes / norm)

    def probabilities(self) -> np.ndarray:
        return (torch.abs(self.amplitudes) ** 2).numpy()

    def register_amplitudes(self, registers: Sequence[str], fixed: Mapping[str, int] = None) -> torch.Tensor:
        """Amplitudes of `registers` on the branch where all other registers hold
        `fixed` (default 0), shaped one axis per register."""
        idx = self.layout.basis_indices(registers, fixed)
        values = self.amplitudes[torch.as_tensor(idx)]
        shape = [1 << self.layout.size(name) for name in registers]
        return values.reshape(shape)

    def reduced(self, registers: Sequence[str]):
        """Drop every register outside `registers`, keeping their all-zero branch."""
        layout = RegisterLayout(tuple((name, self.layout.size(name)) for name in registers))
        return StateVector(layout, self.register_amplitudes(registers).reshape(-1))

    def amplitude_matrix(self, row_register="node", col_register="feature") -> torch.Tensor:
        """Zero-branch amplitudes as a (2^rows, 2^cols) matrix, i.e. vec(H^T) unpacked to H."""
        values = self.register_amplitudes([row_register, col_register]).reshape(-1)
        return rearrange(values, "(i k) -> i k", i=1 << self.layout.size(row_register))

    def marginal(self, registers: Sequence[str]) -> np.ndarray:
        """Born probabilities of the joint outcome of `registers`."""
        probs = torch.abs(self.amplitudes) ** 2
        n = self.layout.num_qubits
        keep = [w for name in registers for w in self.layout.positions(name)]
        rest = [w for w in range(n) if w not in keep]
        view = probs.reshape([2] * n).permute(keep + rest).reshape(1 << len(keep), -1)
        return view.sum(dim=1).numpy()


def init_basis_state(layout: RegisterLayout, index: int) -> StateVector:
    if not 0 <= index < layout.dim:
        raise ValueError(f"Basis index {index} out of range for {layout.num_qubits} qubits")
    psi = torch.zeros(layout.dim, dtype=DTYPE)
    psi[index] = 1
    return StateVector(layout, psi)


def apply_gate(state: StateVector, op: GateOp) -> StateVector:
    psi = apply_op(state.amplitudes.reshape(-1, 1), state.layout, op)
    return StateVector(state.layout, psi.reshape(-1))


def _zero_mask(layout: RegisterLayout, registers: Sequence[str]) -> torch.Tensor:
    mask = torch.ones(layout.dim, dtype=torch.bool)
    index = torch.arange(layout.dim)
    n = layout.num_qubits
    for name in registers:
        shift = n - layout.offset(name) - layout.size(name)
        mask &= ((index >> shift) & ((1 << layout.size(name)) - 1)) == 0
    return mask


def postselect_zero(state: StateVector, registers: Sequence[str]):
    """Project `registers` onto |0...0>, returning (renormalized state, probability)."""
    if not registers:
        return state, 1.0
    for name in registers:
        state.layout.size(name)
    mask = _zero_mask(state.layout, registers)
    projected = torch.where(mask, state.amplitudes, torch.zeros_like(state.amplitudes))
    probability = float(torch.sum(torch.abs(projected) ** 2))
    if probability < POSTSELECT_MIN_PROBABILITY:
        raise PostSelectionError(
            f"Post-selection impossible: probability {probability:.3e} on registers {list(registers)}"
        )
    LOGGER.debug("Post-selected %s with probability %.6f", list(registers), probability)
    return StateVector(state.layout, projected / np.sqrt(probability)), probability


def state_inner_product(a: StateVector, b: StateVector) -> complex:
    if a.layout != b.layout:
        raise ValueError(f"Layout mismatch: {a.layout.registers} vs {b.layout.registers}")
    return complex(torch.vdot(a.amplitudes, b.amplitudes))


def fidelity(a: StateVector, b: StateVector) -> float:
    return abs(state_inner_product(a, b)) ** 2


def sample_measurement(state: StateVector, registers: Sequence[str], shots: int, seed=None) -> Dict[int, int]:
    """Seeded Born-rule sampling of the joint outcome of `registers`."""
    if not registers:
        raise ValueError("At least one register must be measured")
    if shots < 1:
        raise ValueError(f"shots must be at least 1, got {shots}")
    probs = np.clip(state.marginal(registers), 0, None)
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(shots, probs)
    return {int(outcome): int(count) for outcome, count in enumerate(counts) if count}
