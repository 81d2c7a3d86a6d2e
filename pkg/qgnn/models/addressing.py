"""Three address registers i, j, k and the helpers the attention and
message-passing layers share: loading Sum_j |j>|j>|j>|x_j>, the j/k comparator
and the projection onto the mutual address diagonal."""

import logging
from typing import Sequence

import numpy as np
import torch

from qgnn.classical import normalized_rows
from qgnn.encode import pad_matrix, prepare_feature_state
from qgnn.sim import (
    Circuit,
    GateOp,
    PostSelectionError,
    RegisterLayout,
    StateVector,
    block_diagonal,
    pauli_x,
    state_preparation_block,
)
from qgnn.sim.statevector import POSTSELECT_MIN_PROBABILITY

LOGGER = logging.getLogger(__name__)

ADDRESS_REGISTERS = ("i", "j", "k")


def copy_address_perm(width) -> np.ndarray:
    """|a>|b> -> |a>|b XOR a> on two registers of `width` qubits."""
    dim = 1 << width
    idx = np.arange(dim * dim)
    hi, lo = idx // dim, idx % dim
    return hi * dim + (lo ^ hi)


def node_perm(mapping, width) -> np.ndarray:
    """Permutation of a `width`-qubit address register that sends a -> mapping[a]
    and fixes the padding addresses."""
    perm = np.arange(1 << width)
    perm[: len(mapping)] = np.asarray(mapping, dtype=np.int64)
    return perm


def inverse_perm(perm) -> np.ndarray:
    perm = np.asarray(perm, dtype=np.int64)
    out = np.empty_like(perm)
    out[perm] = np.arange(len(perm))
    return out


def feature_loading_block(features, unitary, address_qubits) -> np.ndarray:
    """Block-diagonal over the address: block a prepares U x_a / ||x_a||, the
    padding addresses get the identity."""
    dim = unitary.shape[0]
    rows = pad_matrix(normalized_rows(features), len(features), dim)
    blocks = [unitary @ state_preparation_block(row) for row in rows]
    blocks += [np.eye(dim)] * ((1 << address_qubits) - len(blocks))
    return block_diagonal(blocks)


def prepare_address_state(features, layout: RegisterLayout, payload_register="feature",
                          registers: Sequence[str] = ADDRESS_REGISTERS) -> StateVector:
    """Sum_a |a>|a>|a> |x_a> / ||X||_F: the features are loaded on the first
    address register and copied onto the other two."""
    first = registers[0]
    state = prepare_feature_state(features, layout, first, payload_register)
    width = layout.size(first)
    circuit = Circuit(layout, name="address-copy")
    for name in registers[1:]:
        if layout.size(name) != width:
            raise ValueError(f"Address register {name} has width {layout.size(name)}, expected {width}")
        circuit.append(GateOp.permutation(copy_address_perm(width), layout.qubits(first, name), label="copy"))
    return circuit.run(state)


def comparator_ops(layout: RegisterLayout, source="j", target="k"):
    """target ^= source, bitwise; the target reads all-zero exactly when the
    two addresses agree. The gate list is its own inverse."""
    if layout.size(source) != layout.size(target):
        raise ValueError(f"Cannot compare {source} and {target} of different widths")
    return [
        GateOp([(target, b)], block=pauli_x(), controls=[(source, b)], label="compare")
        for b in range(layout.size(source))
    ]


def _diagonal_mask(layout: RegisterLayout, registers: Sequence[str]) -> torch.Tensor:
    index = torch.arange(layout.dim)
    n = layout.num_qubits
    values = []
    for name in registers:
        shift = n - layout.offset(name) - layout.size(name)
        values.append((index >> shift) & ((1 << layout.size(name)) - 1))
    mask = torch.ones(layout.dim, dtype=torch.bool)
    for other in values[1:]:
        mask &= other == values[0]
    return mask


def project_address_diagonal(state: StateVector, registers: Sequence[str] = ADDRESS_REGISTERS):
    """Project onto Reg(i) = Reg(j) = Reg(k), returning (renormalized state, probability)."""
    mask = _diagonal_mask(state.layout, registers)
    projected = torch.where(mask, state.amplitudes, torch.zeros_like(state.amplitudes))
    probability = float(torch.sum(torch.abs(projected) ** 2))
    if probability < POSTSELECT_MIN_PROBABILITY:
        raise PostSelectionError(f"Address-diagonal projection impossible: probability {probability:.3e}")
    LOGGER.debug("Address-diagonal projection probability %.6f", probability)
    return StateVector(state.layout, projected / np.sqrt(probability)), probability


def diagonal_feature_matrix(state: StateVector, payload_register="feature",
                            registers: Sequence[str] = ADDRESS_REGISTERS) -> np.ndarray:
    """Row a holds the payload amplitudes on |a>|a>|a>, every other register at |0>."""
    rows = 1 << state.layout.size(registers[0])
    out = []
    for a in range(rows):
        fixed = {name: a for name in registers}
        out.append(state.register_amplitudes([payload_register], fixed).numpy())
    return np.stack(out)
