import logging
from typing import Dict, Sequence

import numpy as np

from qgnn.blockenc.block_encoding import BlockEncoding
from qgnn.graph import OneSparsePart
from qgnn.sim import Circuit, GateOp, RegisterLayout, num_qubits_for
from qgnn.sim.gates import block_diagonal

LOGGER = logging.getLogger(__name__)

ANGLE_BITS = 8
VALUE_TOL = 1e-12


def assign_angle_codes(values: Sequence[float], bits=ANGLE_BITS) -> Dict[float, int]:
    """d-bit code per distinct value: nearest to arccos(v)/pi * (2^d - 1), moved
    to the next free code on collision."""
    size = 1 << bits
    distinct = sorted(set(float(v) for v in values))
    if len(distinct) > size:
        raise ValueError(f"{len(distinct)} distinct values do not fit into {bits}-bit angle codes")
    codes, used = {}, set()
    for value in distinct:
        code = int(round(np.arccos(np.clip(value, -1.0, 1.0)) / np.pi * (size - 1)))
        while code in used:
            code = (code + 1) % size
        codes[value] = code
        used.add(code)
    return codes


def controlled_rotation_block(code_values: Dict[int, float], bits) -> np.ndarray:
    """Block-diagonal RY(2 arccos v) on the rotation qubit, selected by the code register."""
    blocks = []
    for code in range(1 << bits):
        value = np.clip(code_values.get(code, 1.0), -1.0, 1.0)
        sine = np.sqrt(max(0.0, 1.0 - value * value))
        blocks.append(np.array([[value, -sine], [sine, value]]))
    return block_diagonal(blocks)


def angle_table_perm(codes_per_row: Sequence[int], bits) -> np.ndarray:
    """Permutation |j>|a> -> |j>|a XOR code(j)> on (data, angle)."""
    size = 1 << bits
    rows = np.repeat(np.arange(len(codes_per_row)), size)
    angles = np.tile(np.arange(size), len(codes_per_row))
    return rows * size + (angles ^ np.asarray(codes_per_row, dtype=np.int64)[rows])


def one_sparse_block_encoding(part: OneSparsePart, data_register="node", rotation_register="rot",
                              angle_register="angle", angle_bits=ANGLE_BITS, data_qubits=None) -> BlockEncoding:
    """U_A = O_c O_A for a single 1-sparse part, with alpha = 1.

    O_A writes an angle code for column j into the workspace, rotates the
    flagged ancilla by that angle and erases the code again.
    """
    values = np.asarray(part.values, dtype=np.float64)
    if np.any(np.abs(values) > 1 + VALUE_TOL):
        raise ValueError(f"1-sparse values must satisfy |v| <= 1, got max {np.max(np.abs(values)):.6g}")
    values = np.clip(values, -1.0, 1.0)
    n = data_qubits or num_qubits_for(part.dim)
    dim = 1 << n
    if dim < part.dim:
        raise ValueError(f"{n} data qubits cannot hold dimension {part.dim}")
    perm = np.arange(dim)
    perm[: part.dim] = part.perm
    padded = np.zeros(dim)
    padded[: part.dim] = values

    codes = assign_angle_codes(padded, angle_bits)
    code_values = {code: value for value, code in codes.items()}
    codes_per_row = [codes[float(v)] for v in padded]

    layout = RegisterLayout(((data_register, n), (rotation_register, 1), (angle_register, angle_bits)))
    data_wires = layout.qubits(data_register)
    angle_wires = layout.qubits(angle_register)
    table = GateOp.permutation(angle_table_perm(codes_per_row, angle_bits), data_wires + angle_wires, label="O_theta")
    rotation = GateOp(angle_wires + layout.qubits(rotation_register),
                      block=controlled_rotation_block(code_values, angle_bits), label="CR")
    circuit = Circuit(layout, [
        table,
        rotation,
        table.inverse(),
        GateOp.permutation(perm, data_wires, label="O_c"),
    ], name="one-sparse")
    return BlockEncoding(circuit, (data_register,), (rotation_register,), (angle_register,),
                         alpha=1.0, epsilon=0.0, label="one-sparse")
