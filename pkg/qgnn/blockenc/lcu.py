import logging
from typing import List, Sequence

import numpy as np

from qgnn.blockenc.block_encoding import BlockEncoding, fresh_register_name
from qgnn.sim import Circuit, GateOp, RegisterLayout, bits_of, num_qubits_for, state_preparation_block

LOGGER = logging.getLogger(__name__)


def _unique(names) -> List[str]:
    out = []
    for name in names:
        if name not in out:
            out.append(name)
    return out


def _check_compatible(encodings: Sequence[BlockEncoding]):
    first = encodings[0]
    for be in encodings[1:]:
        if be.data_registers != first.data_registers:
            raise ValueError(
                f"Data registers differ: {list(first.data_registers)} vs {list(be.data_registers)}"
            )
        for name in be.data_registers:
            if be.layout.size(name) != first.layout.size(name):
                raise ValueError(f"Data register {name} has incompatible widths")
    flagged = set(name for be in encodings for name in be.ancilla_registers)
    clean = set(name for be in encodings for name in be.workspace_registers)
    data = set(first.data_registers)
    if flagged & clean or (flagged | clean) & data:
        raise ValueError(f"Register used with conflicting roles: {sorted((flagged & clean) | ((flagged | clean) & data))}")


def prepare_amplitudes(weights, width) -> np.ndarray:
    amplitudes = np.zeros(1 << width)
    amplitudes[: len(weights)] = np.sqrt(np.asarray(weights, dtype=np.float64))
    return amplitudes


def lcu_combine(encodings: Sequence[BlockEncoding], coefficients: Sequence[float], select_register="select") -> BlockEncoding:
    """Block-encode sum_l c_l A_l with alpha = sum_l |c_l| alpha_l.

    Components act controlled on a fresh select register and share flagged
    ancillas and workspace by name. Negative coefficients become a phase flip
    on their select branch.
    """
    encodings = list(encodings)
    coefficients = np.asarray(coefficients, dtype=np.float64).reshape(-1)
    if not encodings:
        raise ValueError("lcu_combine needs at least one encoding")
    if len(coefficients) != len(encodings):
        raise ValueError(f"{len(encodings)} encodings but {len(coefficients)} coefficients")
    if not np.all(np.isfinite(coefficients)) or np.any(coefficients == 0):
        raise ValueError(f"LCU coefficients must be finite and nonzero, got {coefficients.tolist()}")
    _check_compatible(encodings)

    if len(encodings) == 1 and coefficients[0] > 0:
        be = encodings[0]
        if coefficients[0] == 1:
            return be
        return BlockEncoding(be.circuit, be.data_registers, be.ancilla_registers, be.workspace_registers,
                             alpha=coefficients[0] * be.alpha, epsilon=coefficients[0] * be.epsilon, label=be.label)

    base = encodings[0].layout.union(*[be.layout for be in encodings[1:]])
    select = fresh_register_name(select_register, set(base.names))
    width = num_qubits_for(len(encodings))
    layout = base.with_register(select, width)
    select_wires = layout.qubits(select)

    scaled = np.abs(coefficients) * np.array([be.alpha for be in encodings])
    alpha = float(scaled.sum())
    prepare = GateOp(select_wires, block=state_preparation_block(prepare_amplitudes(scaled / alpha, width)),
                     label="PREP")

    circuit = Circuit(layout, name="lcu")
    circuit.append(prepare)
    for l, be in enumerate(encodings):
        component = be.circuit.remap(layout).controlled(select_wires, bits_of(l, width))
        circuit.extend(component)
    signs = np.ones(1 << width)
    signs[: len(encodings)] = np.sign(coefficients)
    if np.any(signs < 0):
        circuit.append(GateOp(select_wires, block=np.diag(signs), label="signs"))
    circuit.append(prepare.inverse())

    ancillas = _unique([select] + [name for be in encodings for name in be.ancilla_registers])
    workspace = _unique(name for be in encodings for name in be.workspace_registers)
    epsilon = float(np.sum(np.abs(coefficients) * np.array([be.epsilon for be in encodings])))
    LOGGER.debug("LCU of %d encodings on %d qubits, alpha=%.6g", len(encodings), layout.num_qubits, alpha)
    return BlockEncoding(circuit, encodings[0].data_registers, tuple(ancillas), tuple(workspace),
                         alpha=alpha, epsilon=epsilon, label="lcu")


def product_block_encoding(a: BlockEncoding, b: BlockEncoding) -> BlockEncoding:
    """Encoding of A.B / (alpha_a alpha_b): b runs first, then a. Flagged
    ancillas of b get fresh names so both sets are post-selected."""
    _check_compatible([a, b])
    taken = set(a.layout.names) | set(b.layout.names)
    rename = {}
    for name in b.ancilla_registers:
        if name in a.layout:
            rename[name] = fresh_register_name(name, taken)
            taken.add(rename[name])
    for name in a.ancilla_registers:
        if name in b.workspace_registers:
            raise ValueError(f"Register {name} is flagged in one factor and clean workspace in the other")
    if rename:
        b = _renamed(b, rename)
    layout = a.layout.union(b.layout)
    circuit = Circuit(layout, name="product")
    circuit.extend(b.circuit.remap(layout))
    circuit.extend(a.circuit.remap(layout))
    ancillas = _unique(list(a.ancilla_registers) + list(b.ancilla_registers))
    workspace = _unique(list(a.workspace_registers) + list(b.workspace_registers))
    return BlockEncoding(circuit, a.data_registers, tuple(ancillas), tuple(workspace),
                         alpha=a.alpha * b.alpha, epsilon=a.alpha * b.epsilon + b.alpha * a.epsilon,
                         label="product")


def _renamed(be: BlockEncoding, rename) -> BlockEncoding:
    layout = RegisterLayout(tuple((rename.get(name, name), size) for name, size in be.layout.registers))
    return be.embedded(layout, rename)


def power_block_encoding(be: BlockEncoding, k: int) -> BlockEncoding:
    """A^k / alpha^k by repeated products."""
    if k < 1:
        raise ValueError(f"Power must be at least 1, got {k}")
    out = be
    for _ in range(k - 1):
        out = product_block_encoding(be, out)
    return out
