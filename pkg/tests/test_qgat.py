import numpy as np
import pytest
import torch

from qgnn.classical import attention_scores
from qgnn.graph import Graph
from qgnn.models import (
    AttentionOracleConfig,
    GatLayerConfig,
    apply_graph_attention_layer,
    attention_score_records,
    build_o_diagonal,
    build_selective_copy,
    code_value,
    conditional_rotation_encode,
    grover_eigenphases,
    make_attention_config,
    make_gat_layer_config,
    oracle_outcomes,
    run_attention_oracle,
    selective_copy_cascade,
    value_code,
)
from qgnn.models.addressing import node_perm
from qgnn.models.qgat import attention_layer_layout, part_score_codes
from qgnn.sim import Circuit, GateOp, RegisterLayout, StateVector, num_qubits_for
from qgnn.utilities import gat_reference, golden_configs, matrix_fidelity


def test_value_codes():
    assert value_code(1.0, "magnitude-squared", 4) == 15
    assert value_code(0.0, "magnitude-squared", 4) == 0
    assert code_value(value_code(-0.5, "signed-real", 4), "signed-real", 4) == pytest.approx(-4 / 7)
    assert value_code(-0.0001, "signed-real", 4) == 0


def test_config_validation(path2):
    att = make_attention_config(path2)
    with pytest.raises(ValueError):
        AttentionOracleConfig(att.key, att.query, t=1)
    with pytest.raises(ValueError):
        AttentionOracleConfig(att.key, att.query, mode="exact")
    with pytest.raises(ValueError):
        AttentionOracleConfig(att.key, att.query, convention="cosine")
    with pytest.raises(ValueError):
        GatLayerConfig(make_gat_layer_config(path2).feature_pqc, r=-0.1)


@pytest.mark.parametrize("convention", ["magnitude-squared", "signed-real"])
def test_score_records_match_rounded_overlaps(fixture_graph, convention):
    att = make_attention_config(fixture_graph, t=6, seed=2, convention=convention)
    records = attention_score_records(att, fixture_graph)
    m = num_qubits_for(fixture_graph.num_features)
    expected = attention_scores(fixture_graph.features, *att.unitaries(m), convention=convention)
    for (i, j), record in records.items():
        assert record.code == value_code(expected[i, j], convention, 6)
        assert -np.cos(2 * record.theta) == pytest.approx(expected[i, j], abs=1e-9)


def test_idealized_oracle_stores_scores_and_cleans_up(triangle):
    att = make_attention_config(triangle, t=6, seed=4)
    oracle = run_attention_oracle(att, triangle)
    for (i, j), (code, probability, clean) in oracle_outcomes(oracle, triangle).items():
        assert code == oracle.records[i, j].code
        assert probability == pytest.approx(1.0, abs=1e-9)
        assert clean == pytest.approx(1.0, abs=1e-9)


def test_compact_oracle_matches_structured(path2):
    oracle = run_attention_oracle(make_attention_config(path2, t=4, seed=1), path2)
    registers = ["i", "j", "m1"]
    structured = oracle.circuit.restricted_unitary(registers)
    compact = oracle.compact_circuit().restricted_unitary(registers)
    assert torch.allclose(structured, compact, atol=1e-9)


def test_full_circuit_phase_estimation(path2):
    att = make_attention_config(path2, t=3, mode="full-circuit-qpe", identity=True)
    oracle = run_attention_oracle(att, path2)
    outcomes = oracle_outcomes(oracle, path2)
    assert outcomes[0, 0][0] == value_code(1.0, att.convention, 3)
    assert outcomes[0, 1][0] == value_code(0.0, att.convention, 3)
    for _, probability, clean in outcomes.values():
        assert probability == pytest.approx(1.0, abs=1e-9)
        assert clean == pytest.approx(1.0, abs=1e-9)


def test_phase_resolution_is_checked():
    g = Graph(3, [(0, 1), (1, 2)], [[1.0, 0.0], [0.0, 1.0], [1.0, np.sqrt(3.0)]])
    att = make_attention_config(g, t=2, mode="full-circuit-qpe", identity=True)
    with pytest.raises(ValueError, match="phase bits"):
        run_attention_oracle(att, g)


def test_grover_eigenphases(star4):
    att = make_attention_config(star4, t=6, seed=6)
    records = attention_score_records(att, star4)
    for i, j in [(0, 1), (2, 3), (1, 1)]:
        phases = grover_eigenphases(att, star4, i, j)
        assert np.allclose(np.abs(phases), 2 * records[i, j].theta, atol=1e-9)


@pytest.mark.parametrize("width", [1, 2, 3])
def test_selective_copy_equals_cascade(width):
    structured = build_selective_copy(width, 1).unitary()
    cascade = selective_copy_cascade(width, 1).unitary()
    assert torch.equal(structured, cascade)


def test_conditional_rotation_width_check(path2):
    layout = attention_layer_layout(path2, 4)
    with pytest.raises(ValueError):
        conditional_rotation_encode(layout, t=5)


def test_o_diagonal_loads_neighbour_score(triangle):
    att = make_attention_config(triangle, t=4, seed=3)
    cfg = make_gat_layer_config(triangle)
    layout = attention_layer_layout(triangle, att.t)
    records = attention_score_records(att, triangle)
    part = cfg.support_decomposition(triangle).parts[0]
    codes = part_score_codes(part, records, layout.size("i"))
    circuit = build_o_diagonal(0, cfg, att, triangle, layout, records)
    for j in range(triangle.num_nodes):
        start = int(layout.basis_indices([], {"i": j, "j": j, "k": j})[0])
        psi = torch.zeros(layout.dim, dtype=torch.complex128)
        psi[start] = 1
        out = circuit.run(StateVector(layout, psi))
        index = int(torch.argmax(torch.abs(out.amplitudes)))
        fields = layout.split_index(index)
        assert fields["m2"] == codes[part.perm[j], j]
        assert fields["m1"] == 0
        assert fields["i"] == j


def test_gat_layer_matches_reference(fixture_graph):
    att = make_attention_config(fixture_graph, t=4, seed=1)
    cfg = make_gat_layer_config(fixture_graph, seed=9, r=0.5)
    result = apply_graph_attention_layer(fixture_graph, cfg, att)
    quantum = result.output_matrix(rows=fixture_graph.num_nodes)
    assert matrix_fidelity(quantum, gat_reference(fixture_graph, cfg, att)) >= 1 - 1e-9
    assert 0 < result.postselect_probability <= 1


def test_gat_layer_signed_convention(small_graph):
    att = make_attention_config(small_graph, t=4, seed=2, convention="signed-real")
    cfg = make_gat_layer_config(small_graph, seed=4, r=0.25, include_self=True)
    quantum = apply_graph_attention_layer(small_graph, cfg, att).output_matrix(rows=small_graph.num_nodes)
    assert matrix_fidelity(quantum, gat_reference(small_graph, cfg, att)) >= 1 - 1e-9


def test_edgeless_graph():
    g = Graph(2, [], [[1.0, 0.0], [0.0, 1.0]])
    att = make_attention_config(g, t=4)
    cfg = make_gat_layer_config(g, seed=2, r=0.5)
    quantum = apply_graph_attention_layer(g, cfg, att).output_matrix(rows=2)
    assert matrix_fidelity(quantum, gat_reference(g, cfg, att)) >= 1 - 1e-9
    with pytest.raises(ValueError):
        apply_graph_attention_layer(g, make_gat_layer_config(g), att)


@pytest.mark.parametrize("convention", ["magnitude-squared", "signed-real"])
def test_conditional_rotation_amplitudes(convention):
    layout = RegisterLayout.of(("m2", 4), ("rot", 1))
    circuit = conditional_rotation_encode(layout, convention=convention, t=4)
    for code in range(16):
        psi = torch.zeros(layout.dim, dtype=torch.complex128)
        psi[int(layout.basis_indices([], {"m2": code})[0])] = 1
        out = circuit.run(StateVector(layout, psi)).amplitudes
        value = code_value(code, convention, 4)
        kept = out[int(layout.basis_indices([], {"m2": code, "rot": 0})[0])]
        flagged = out[int(layout.basis_indices([], {"m2": code, "rot": 1})[0])]
        assert float(kept.real) == pytest.approx(value, abs=1e-12)
        assert float(flagged.real) == pytest.approx(np.sqrt(1 - value ** 2), abs=1e-12)
        assert float(torch.sum(torch.abs(out) ** 2)) == pytest.approx(1.0, abs=1e-12)


def test_o_diagonal_matches_oracle_built_form(path2):
    """The score lookup in O_diagonal agrees with O_c, the full attention oracle,
    the selective copy and the oracle's inverse run in sequence."""
    att = make_attention_config(path2, t=4, seed=5)
    cfg = make_gat_layer_config(path2)
    oracle = run_attention_oracle(att, path2)
    n = oracle.circuit.layout.size("i")
    layout = RegisterLayout(oracle.circuit.layout.registers + (("k", n), ("m2", att.t)))
    part = cfg.support_decomposition(path2).parts[0]
    move = GateOp.permutation(node_perm(part.perm, n), layout.qubits("i"))

    built = Circuit(layout, name="o-diagonal[oracle]")
    built.append(move)
    built.extend(oracle.circuit.remap(layout))
    built.extend(build_selective_copy(n, att.t).remap(layout))
    built.extend(oracle.circuit.inverse().remap(layout))
    built.append(move.inverse())
    lookup = build_o_diagonal(0, cfg, att, path2, layout, oracle.records)

    for j in range(path2.num_nodes):
        for copy in (0, 5):
            psi = torch.zeros(layout.dim, dtype=torch.complex128)
            psi[int(layout.basis_indices([], {"i": j, "j": j, "k": j, "m2": copy})[0])] = 1
            state = StateVector(layout, psi)
            assert torch.allclose(built.run(state).amplitudes, lookup.run(state).amplitudes, atol=1e-9)


def test_gat_layer_matches_golden(fixture_graph, goldens):
    layer_cfg, att = golden_configs()["gat"]
    quantum = apply_graph_attention_layer(fixture_graph, layer_cfg, att).output_matrix(rows=fixture_graph.num_nodes)
    assert matrix_fidelity(quantum, goldens[fixture_graph.name]["gat"]) >= 1 - 1e-9
