import gc

import numpy as np
import pytest
import torch

from qgnn.sim import gates
from qgnn.sim import (
    Circuit,
    GateOp,
    PostSelectionError,
    RegisterLayout,
    StateVector,
    fidelity,
    hadamard,
    init_basis_state,
    is_unitary,
    num_qubits_for,
    pauli_x,
    postselect_zero,
    sample_measurement,
    state_preparation_block,
    swap_perm,
)


def test_num_qubits_for():
    assert num_qubits_for(1) == 1
    assert num_qubits_for(2) == 1
    assert num_qubits_for(3) == 2
    assert num_qubits_for(8) == 3
    with pytest.raises(ValueError):
        num_qubits_for(0)


def test_layout_is_big_endian():
    layout = RegisterLayout.of(("a", 1), ("b", 2))
    assert layout.num_qubits == 3
    assert layout.split_index(0b101) == {"a": 1, "b": 1}
    assert list(layout.basis_indices(["b"], {"a": 1})) == [4, 5, 6, 7]


def test_layout_rejects_duplicates_and_overflow(monkeypatch):
    with pytest.raises(ValueError):
        RegisterLayout.of(("a", 1), ("a", 2))
    monkeypatch.setenv("QGNN_MAX_QUBITS", "4")
    with pytest.raises(ValueError, match="QGNN_MAX_QUBITS"):
        RegisterLayout.of(("a", 3), ("b", 2))


def test_x_gate_on_most_significant_wire():
    layout = RegisterLayout.of(("q", 2))
    state = init_basis_state(layout, 0)
    out = Circuit(layout, [GateOp([("q", 0)], block=pauli_x())]).run(state)
    assert np.isclose(abs(out.amplitudes[2]), 1.0)


def test_controlled_gate_respects_control_value():
    layout = RegisterLayout.of(("c", 1), ("t", 1))
    op = GateOp([("t", 0)], block=pauli_x(), controls=[("c", 0)], control_values=(0,))
    out = Circuit(layout, [op]).run(init_basis_state(layout, 0))
    assert np.isclose(abs(out.amplitudes[1]), 1.0)
    out = Circuit(layout, [op]).run(init_basis_state(layout, 2))
    assert np.isclose(abs(out.amplitudes[2]), 1.0)


def test_gate_validation():
    with pytest.raises(ValueError):
        GateOp([("q", 0)], block=np.array([[1, 1], [0, 1]]))
    with pytest.raises(ValueError):
        GateOp([("q", 0)], block=pauli_x(), controls=[("q", 0)])
    with pytest.raises(ValueError):
        GateOp.permutation([0, 0], [("q", 0)])


def test_verified_blocks_are_forgotten_when_collected():
    op = GateOp([("q", 0)], block=np.array([[0.0, 1.0], [1.0, 0.0]]))
    key = id(op.block)
    assert gates._VERIFIED[key]() is op.block
    del op
    gc.collect()
    assert key not in gates._VERIFIED


def test_circuit_rejects_unknown_wire():
    layout = RegisterLayout.of(("q", 1))
    with pytest.raises(KeyError):
        Circuit(layout, [GateOp([("r", 0)], block=pauli_x())])


def test_inverse_undoes_circuit(rng):
    layout = RegisterLayout.of(("a", 2), ("b", 1))
    block = state_preparation_block(rng.normal(size=4) + 1j * rng.normal(size=4))
    circuit = Circuit(layout, [
        GateOp(layout.qubits("a"), block=block),
        GateOp([("b", 0)], block=hadamard(), controls=[("a", 1)]),
        GateOp.permutation(swap_perm(1), layout.qubits("a")),
    ])
    u = circuit.unitary()
    assert is_unitary(u)
    identity = circuit.copy().extend(circuit.inverse()).unitary()
    assert torch.allclose(identity, torch.eye(layout.dim, dtype=identity.dtype), atol=1e-12)


def test_state_preparation_block_first_column(rng):
    vector = rng.normal(size=8)
    block = state_preparation_block(vector)
    assert np.allclose(block[:, 0], vector / np.linalg.norm(vector))
    assert is_unitary(block)


def test_postselect_zero_renormalizes():
    layout = RegisterLayout.of(("anc", 1), ("d", 1))
    state = StateVector(layout, np.array([0.6, 0.0, 0.0, 0.8]))
    out, p = postselect_zero(state, ["anc"])
    assert np.isclose(p, 0.36)
    assert np.isclose(out.norm(), 1.0)


def test_postselect_zero_impossible():
    layout = RegisterLayout.of(("anc", 1))
    with pytest.raises(PostSelectionError):
        postselect_zero(init_basis_state(layout, 1), ["anc"])


def test_sampling_is_seeded():
    layout = RegisterLayout.of(("q", 1))
    state = Circuit(layout, [GateOp([("q", 0)], block=hadamard())]).run(init_basis_state(layout, 0))
    a = sample_measurement(state, ["q"], 1000, seed=3)
    b = sample_measurement(state, ["q"], 1000, seed=3)
    assert a == b
    assert sum(a.values()) == 1000


def test_fidelity_ignores_global_phase():
    layout = RegisterLayout.of(("q", 1))
    a = StateVector(layout, np.array([1, 1]) / np.sqrt(2))
    b = StateVector(layout, 1j * np.array([1, 1]) / np.sqrt(2))
    assert np.isclose(fidelity(a, b), 1.0)
