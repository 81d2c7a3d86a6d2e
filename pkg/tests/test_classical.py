import numpy as np
import pytest
from scipy.stats import unitary_group

from qgnn.classical import (
    ClassicalModelConfig,
    attention_scores,
    cross_entropy_cost,
    gat_reference_update,
    gcn_forward,
    lgc_filter,
    lgc_forward,
    message_weights,
    mpnn_reference_update,
    naive_gat_update,
    naive_gcn_forward,
    naive_lgc_forward,
    naive_mpnn_update,
    naive_normalized_adjacency,
    naive_sgc_forward,
    round_score,
    sgc_forward,
)
from qgnn.graph import Graph, graph_laplacian, normalized_adjacency
from qgnn.models import default_unitary_family
from qgnn.utilities import golden_reference

TOL = 1e-12


def _unitary(dim, seed):
    return unitary_group.rvs(dim, random_state=seed)


def _permutation(rng, n):
    perm = rng.permutation(n)
    matrix = np.zeros((n, n))
    matrix[perm, np.arange(n)] = 1
    return perm, matrix


def test_naive_adjacency_matches(fixture_graph):
    assert np.allclose(np.array(naive_normalized_adjacency(fixture_graph)), normalized_adjacency(fixture_graph),
                       atol=TOL)


def test_gcn_matches_naive(fixture_graph):
    weights = [_unitary(2, 1), _unitary(2, 2)]
    cfg = ClassicalModelConfig("gcn", weights)
    assert np.allclose(gcn_forward(fixture_graph, cfg).output, naive_gcn_forward(fixture_graph, cfg), atol=TOL)


def test_sgc_matches_naive(fixture_graph):
    cfg = ClassicalModelConfig("sgc", [_unitary(2, 3)], k=3)
    assert np.allclose(sgc_forward(fixture_graph, cfg).output, naive_sgc_forward(fixture_graph, cfg), atol=TOL)


def test_lgc_matches_naive(star4):
    theta = _unitary(2, 4)
    coefficients = [0.5, -0.2, 0.1]
    dense = lgc_forward(star4, theta, coefficients=coefficients).output
    naive = naive_lgc_forward(star4, theta, coefficients, graph_laplacian(star4))
    assert np.allclose(dense, naive, atol=TOL)


def test_lgc_filter_needs_one_source(star4):
    with pytest.raises(ValueError):
        lgc_filter(star4)
    with pytest.raises(ValueError):
        lgc_filter(star4, phases=[0.1, 0.2], coefficients=[1.0])


@pytest.mark.parametrize("convention", ["magnitude-squared", "signed-real"])
def test_gat_matches_naive(fixture_graph, convention):
    cfg = ClassicalModelConfig("gat", [_unitary(2, 5)], convention=convention, t=6, r=0.3,
                               key_unitary=_unitary(2, 6), query_unitary=_unitary(2, 7))
    assert np.allclose(gat_reference_update(fixture_graph, cfg), naive_gat_update(fixture_graph, cfg), atol=TOL)


def test_mpnn_matches_naive(fixture_graph):
    cfg = ClassicalModelConfig("mpnn", r=0.4, unitaries=default_unitary_family(1),
                               message_unitaries=(_unitary(2, 8), _unitary(2, 9), _unitary(4, 10)))
    assert np.allclose(mpnn_reference_update(fixture_graph, cfg), naive_mpnn_update(fixture_graph, cfg), atol=TOL)


def test_message_weights_are_distributions(star4):
    weights = message_weights(star4.features, (_unitary(2, 1), _unitary(2, 2), _unitary(4, 3)))
    assert weights.shape == (4, 4, 4)
    assert np.allclose(weights.sum(axis=2), 1.0)


def test_gcn_is_permutation_equivariant(rng, random8):
    cfg = ClassicalModelConfig("gcn", [_unitary(2, 11), _unitary(2, 12)])
    perm, matrix = _permutation(rng, random8.num_nodes)
    out = gcn_forward(random8, cfg).output
    permuted = gcn_forward(random8.permute(perm), cfg).output
    assert np.allclose(matrix @ out, permuted, atol=TOL)


def test_sgc_and_gat_are_permutation_equivariant(rng, random8):
    perm, matrix = _permutation(rng, random8.num_nodes)
    sgc = ClassicalModelConfig("sgc", [_unitary(2, 13)], k=2)
    assert np.allclose(matrix @ sgc_forward(random8, sgc).output, sgc_forward(random8.permute(perm), sgc).output,
                       atol=TOL)
    gat = ClassicalModelConfig("gat", [_unitary(2, 14)], r=0.5, key_unitary=_unitary(2, 15),
                               query_unitary=_unitary(2, 16))
    assert np.allclose(matrix @ gat_reference_update(random8, gat),
                       gat_reference_update(random8.permute(perm), gat), atol=TOL)


def test_mpnn_and_lgc_are_permutation_equivariant(rng, random8):
    perm, matrix = _permutation(rng, random8.num_nodes)
    mpnn = ClassicalModelConfig("mpnn", r=0.2, unitaries=default_unitary_family(1),
                                message_unitaries=(_unitary(2, 17), _unitary(2, 18), _unitary(4, 19)))
    assert np.allclose(matrix @ mpnn_reference_update(random8, mpnn),
                       mpnn_reference_update(random8.permute(perm), mpnn), atol=TOL)
    theta = _unitary(2, 20)
    out = lgc_forward(random8, theta, phases=[0.3, -0.4, 0.2]).output
    permuted = lgc_forward(random8.permute(perm), theta, phases=[0.3, -0.4, 0.2]).output
    assert np.allclose(matrix @ out, permuted, atol=1e-10)


def test_attention_scores_conventions(triangle):
    eye = np.eye(2)
    magnitude = attention_scores(triangle.features, eye, eye)
    assert np.isclose(magnitude[0, 1], 0.0)
    assert np.isclose(magnitude[0, 2], 0.5)
    signed = attention_scores(triangle.features, eye, eye, "signed-real")
    assert np.isclose(signed[0, 2], 1 / np.sqrt(2))


def test_round_score():
    assert round_score(0.5, "magnitude-squared", 2) == pytest.approx(2 / 3)
    assert round_score(-0.5, "signed-real", 3) == pytest.approx(-2 / 3)
    assert round_score(1.7, "magnitude-squared", 4) == 1.0


def test_cross_entropy(path2):
    assert cross_entropy_cost(np.eye(2), path2) == 0.0
    assert cross_entropy_cost(np.full((2, 2), 0.5), path2) == pytest.approx(2 * np.log(2))
    assert cross_entropy_cost(np.array([[0.0, 1.0], [1.0, 0.0]]), path2) == float("inf")
    with pytest.raises(ValueError):
        cross_entropy_cost(np.ones((2, 2)), path2)


def test_config_validation():
    with pytest.raises(ValueError):
        ClassicalModelConfig("rnn")
    with pytest.raises(ValueError):
        ClassicalModelConfig("gat", convention="dot")
    with pytest.raises(ValueError):
        ClassicalModelConfig("gat", r=-1.0)


def test_unlabeled_graph_has_no_cross_entropy():
    g = Graph(2, [(0, 1)], np.eye(2))
    with pytest.raises(ValueError):
        cross_entropy_cost(np.eye(2), g)


@pytest.mark.parametrize("key", ["gcn_two_layer", "sgc_k2", "lgc", "gat", "mpnn"])
def test_references_match_goldens(fixture_graph, goldens, key):
    assert np.allclose(golden_reference(fixture_graph, key), goldens[fixture_graph.name][key], atol=1e-12)
