import json

import numpy as np
import pytest

from qgnn.graph import (
    Graph,
    GraphFormatError,
    graph_from_dict,
    graph_laplacian,
    graph_to_dict,
    laplacian_scale,
    load_graph,
    make_random_graph,
    normalized_adjacency,
    one_sparse_decompose,
)
from qgnn.utilities import FIXTURES, GOLDEN_KEYS


def test_fixture_goldens(fixture_graph, goldens):
    assert set(goldens) == set(FIXTURES)
    golden = goldens[fixture_graph.name]
    assert set(golden) == set(GOLDEN_KEYS)
    adj = normalized_adjacency(fixture_graph)
    assert np.allclose(adj, golden["normalized_adjacency"], atol=1e-12)
    assert np.allclose(adj @ fixture_graph.features, golden["propagated_k1"], atol=1e-12)
    assert np.allclose(adj @ adj @ fixture_graph.features, golden["propagated_k2"], atol=1e-12)


def test_stored_random_fixture(random8):
    assert random8.num_nodes == 8
    assert int(random8.adjacency().sum(axis=0).max()) == 3


def test_normalized_adjacency_is_symmetric(fixture_graph):
    adj = normalized_adjacency(fixture_graph)
    assert np.allclose(adj, adj.T)
    assert np.linalg.norm(adj, 2) <= 1 + 1e-12


def test_laplacian_variants(star4):
    shifted = graph_laplacian(star4, "normalized-shifted")
    halved = graph_laplacian(star4, "normalized-halved")
    assert np.linalg.norm(shifted, 2) <= 1 + 1e-12
    assert np.allclose(halved, (np.eye(4) - normalized_adjacency(star4)) / 2)
    assert laplacian_scale(star4, "normalized-halved") == 2.0
    with pytest.raises(ValueError):
        graph_laplacian(star4, "unknown")


def test_graph_validation():
    with pytest.raises(GraphFormatError):
        Graph(2, [(0, 0)], np.ones((2, 1)))
    with pytest.raises(GraphFormatError):
        Graph(2, [(0, 2)], np.ones((2, 1)))
    with pytest.raises(GraphFormatError):
        Graph(2, [], np.ones((3, 1)))
    with pytest.raises(GraphFormatError):
        Graph(2, [], [[1.0], [np.nan]])


def test_edges_are_canonical():
    g = Graph(3, [(1, 0), (0, 1), (2, 1)], np.ones((3, 1)))
    assert g.edges == ((0, 1), (1, 2))
    assert g.max_row_nonzeros == 3


def test_dict_round_trip(star4):
    g = graph_from_dict(graph_to_dict(star4))
    assert g.edges == star4.edges
    assert np.array_equal(g.features, star4.features)
    assert np.array_equal(g.labels, star4.labels)


def test_load_json_and_tsv(tmp_path, triangle):
    path = tmp_path / "tri.json"
    path.write_text(json.dumps(graph_to_dict(triangle)))
    assert load_graph(str(path)).edges == triangle.edges

    edges = tmp_path / "tri.tsv"
    edges.write_text("0\t1\n1\t2\n0\t2\n")
    (tmp_path / "tri.csv").write_text("1,0\n0,1\n1,1\n")
    g = load_graph(str(edges))
    assert g.edges == triangle.edges
    assert np.array_equal(g.features, triangle.features)


def test_load_errors(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_graph(str(tmp_path / "missing.json"))
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(GraphFormatError):
        load_graph(str(bad))
    ragged = tmp_path / "ragged.json"
    ragged.write_text(json.dumps({"nodes": [{"id": 0, "features": [1]}, {"id": 1, "features": [1, 2]}]}))
    with pytest.raises(GraphFormatError):
        load_graph(str(ragged))


def test_random_graph_is_seeded():
    a = make_random_graph(8, 0.45, 2, seed=8, max_degree=3)
    b = make_random_graph(8, 0.45, 2, seed=8, max_degree=3)
    assert a.edges == b.edges
    assert np.array_equal(a.features, b.features)
    assert a.degrees().max() <= 3


def test_permute_relabels_nodes(star4):
    perm = [2, 0, 3, 1]
    g = star4.permute(perm)
    assert np.allclose(g.features[2], star4.features[0])
    assert (1, 2) in g.edges or (2, 1) in g.edges


def test_one_sparse_decompose_reconstructs(fixture_graph):
    adj = normalized_adjacency(fixture_graph)
    decomposition = one_sparse_decompose(adj)
    assert np.allclose(decomposition.reconstruct(), adj, atol=1e-12)
    assert decomposition.num_parts <= fixture_graph.max_row_nonzeros
    for part in decomposition.parts:
        assert sorted(part.perm.tolist()) == list(range(fixture_graph.num_nodes))


def test_one_sparse_decompose_zero_matrix():
    assert one_sparse_decompose(np.zeros((3, 3))).num_parts == 0
    with pytest.raises(ValueError):
        one_sparse_decompose(np.zeros((2, 3)))
