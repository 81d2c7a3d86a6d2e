from dataclasses import replace

import numpy as np
import pytest
import torch

from qgnn.encode import pad_matrix
from qgnn.graph import Graph, one_sparse_decompose
from qgnn.models import (
    MpnnConfig,
    apply_message_passing_layer,
    build_message_unitary,
    build_selective_lcu,
    default_unitary_family,
    make_mpnn_config,
    message_layer_layout,
    selective_lcu_cascade,
)
from qgnn.sim import StateVector, is_unitary
from qgnn.utilities import golden_configs, load_fixture, matrix_fidelity, mpnn_reference


@pytest.mark.parametrize("n_qubits", [1, 2])
def test_default_family_is_unitary(n_qubits):
    family = default_unitary_family(n_qubits)
    assert len(family) == 1 << n_qubits
    assert all(is_unitary(u) for u in family)
    assert np.allclose(family[0], np.eye(1 << n_qubits))


def test_config_validation(path2):
    cfg = make_mpnn_config(path2)
    with pytest.raises(ValueError, match="not unitary"):
        MpnnConfig(cfg.source_pqc, cfg.target_pqc, cfg.joint_pqc, unitaries=[np.array([[1.0, 1.0], [0.0, 1.0]])])
    with pytest.raises(ValueError):
        MpnnConfig(cfg.source_pqc, cfg.target_pqc, cfg.joint_pqc, r=-1.0)
    with pytest.raises(ValueError):
        MpnnConfig(cfg.source_pqc, cfg.target_pqc, cfg.joint_pqc, unitaries=[np.eye(2), np.eye(4)])
    with pytest.raises(ValueError, match="exceed"):
        MpnnConfig(cfg.source_pqc, cfg.target_pqc, cfg.joint_pqc, unitaries=[np.eye(2)] * 5).family(1)


def test_message_unitary_prepares_normalized_message(triangle):
    cfg = make_mpnn_config(triangle, seed=3)
    layout = message_layer_layout(triangle)
    circuit = build_message_unitary(cfg, triangle, layout)
    u_a, u_b, u_joint = cfg.message_unitaries(layout.size("m2"))
    x = pad_matrix(triangle.features / np.linalg.norm(triangle.features, axis=1, keepdims=True), 3, 2)
    for i, j in [(0, 1), (2, 0)]:
        psi = torch.zeros((layout.dim, 1), dtype=torch.complex128)
        psi[int(layout.basis_indices([], {"i": i, "j": j})[0]), 0] = 1
        out = circuit.run_batch(psi)
        idx = layout.basis_indices(["m2", "m3"], {"i": i, "j": j})
        expected = u_joint @ np.kron(u_a @ x[i], u_b @ x[j])
        assert np.allclose(out[idx, 0].numpy(), expected, atol=1e-10)


def test_selective_lcu_equals_cascade(path2):
    cfg = make_mpnn_config(path2, seed=1)
    layout = message_layer_layout(path2)
    assert torch.allclose(build_selective_lcu(cfg, layout).unitary(), selective_lcu_cascade(cfg, layout).unitary(),
                          atol=1e-12)


def test_layer_matches_reference(fixture_graph):
    cfg = make_mpnn_config(fixture_graph, seed=5, r=0.5)
    result = apply_message_passing_layer(fixture_graph, cfg)
    quantum = result.output_matrix(rows=fixture_graph.num_nodes)
    assert matrix_fidelity(quantum, mpnn_reference(fixture_graph, cfg)) >= 1 - 1e-9
    assert 0 < result.postselect_probability <= 1


def test_identity_family_scales_by_degree(triangle):
    cfg = make_mpnn_config(triangle, seed=2, unitaries=[], r=0.5)
    quantum = apply_message_passing_layer(triangle, cfg).output_matrix(rows=3)
    degree = triangle.adjacency().sum(axis=0)
    expected = (degree + 0.5)[:, None] * pad_matrix(triangle.features, 3, quantum.shape[1])
    assert matrix_fidelity(quantum, expected) >= 1 - 1e-9


def test_edgeless_without_residual_fails():
    g = Graph(2, [], [[1.0, 0.0], [0.0, 1.0]])
    with pytest.raises(ValueError, match="no edges"):
        apply_message_passing_layer(g, make_mpnn_config(g))


@pytest.mark.parametrize("name", ["path-2", "random-8"])
def test_selective_lcu_leaves_mismatched_branches_untouched(name):
    g = load_fixture(name)
    cfg = make_mpnn_config(g, seed=4)
    layout = message_layer_layout(g)
    rng = np.random.default_rng(11)
    psi = torch.as_tensor(rng.normal(size=layout.dim) + 1j * rng.normal(size=layout.dim))
    psi = psi / torch.linalg.norm(psi)
    out = build_selective_lcu(cfg, layout).run(StateVector(layout, psi)).amplitudes
    fields = [layout.split_index(index) for index in range(layout.dim)]
    mismatched = torch.as_tensor([f["j"] != f["k"] for f in fields])
    assert torch.equal(out[mismatched], psi[mismatched])
    assert not torch.allclose(out[~mismatched], psi[~mismatched])


def test_decomposition_must_match_graph(path2, triangle):
    cfg = replace(make_mpnn_config(path2), decomposition=one_sparse_decompose(triangle.adjacency()))
    with pytest.raises(ValueError, match="does not match"):
        cfg.support_decomposition(path2)
    with pytest.raises(ValueError, match="does not match"):
        apply_message_passing_layer(path2, cfg)


def test_layer_matches_golden(fixture_graph, goldens):
    cfg = golden_configs()["mpnn"]
    quantum = apply_message_passing_layer(fixture_graph, cfg).output_matrix(rows=fixture_graph.num_nodes)
    assert matrix_fidelity(quantum, goldens[fixture_graph.name]["mpnn"]) >= 1 - 1e-9
