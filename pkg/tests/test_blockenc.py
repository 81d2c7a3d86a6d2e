import numpy as np
import pytest

from qgnn.blockenc import (
    QSVTSequence,
    apply_polynomial_to_symmetric,
    assign_angle_codes,
    check_block_norm,
    encoded_matrix,
    extract_encoded_block,
    lcu_combine,
    matrix_block_encoding,
    mixed_parity_qsvt,
    one_sparse_block_encoding,
    power_block_encoding,
    product_block_encoding,
    qsvt_transform,
    reference_qsvt_scalar,
    workspace_residual,
)
from qgnn.encode import pad_matrix
from qgnn.graph import OneSparsePart, normalized_adjacency


def _random_part(rng, dim):
    return OneSparsePart(rng.permutation(dim), rng.uniform(-1.0, 1.0, size=dim))


def _padded(matrix, dim):
    return pad_matrix(matrix, dim, dim)


def _instance(seed):
    """Seeded generator and a dimension in 2-16; seeds 0-14 visit every dimension once."""
    return np.random.default_rng(seed), 2 + seed % 15


@pytest.mark.parametrize("seed", range(20))
def test_one_sparse_round_trip(seed):
    rng, dim = _instance(seed)
    part = _random_part(rng, dim)
    be = one_sparse_block_encoding(part)
    assert be.alpha == 1.0
    assert np.allclose(encoded_matrix(be).numpy(), _padded(part.matrix(), be.data_dim), atol=1e-9)
    assert workspace_residual(be) <= 1e-12


def test_one_sparse_rejects_large_values():
    with pytest.raises(ValueError):
        one_sparse_block_encoding(OneSparsePart([1, 0], [1.5, 0.2]))


def test_angle_codes_are_distinct():
    codes = assign_angle_codes([0.1, 0.1, 0.5, -0.3, 0.0], bits=4)
    assert len(set(codes.values())) == len(codes) == 4
    with pytest.raises(ValueError):
        assign_angle_codes(np.linspace(-1, 1, 20), bits=2)


@pytest.mark.parametrize("seed", range(20))
def test_lcu_round_trip(seed):
    rng, dim = _instance(seed)
    a, b = _random_part(rng, dim), _random_part(rng, dim)
    coefficients = rng.uniform(0.2, 1.0, size=2) * rng.choice([-1.0, 1.0], size=2)
    be = lcu_combine([one_sparse_block_encoding(a), one_sparse_block_encoding(b)], coefficients)
    assert np.isclose(be.alpha, np.sum(np.abs(coefficients)))
    target = coefficients[0] * a.matrix() + coefficients[1] * b.matrix()
    assert np.allclose(encoded_matrix(be).numpy(), _padded(target, be.data_dim), atol=1e-9)


def test_lcu_rejects_zero_coefficient(rng):
    be = one_sparse_block_encoding(_random_part(rng, 2))
    with pytest.raises(ValueError):
        lcu_combine([be, be], [1.0, 0.0])
    with pytest.raises(ValueError):
        lcu_combine([be], [1.0, 2.0])


@pytest.mark.parametrize("seed", range(20))
def test_product_round_trip(seed):
    rng, dim = _instance(seed)
    a, b = _random_part(rng, dim), _random_part(rng, dim)
    be = product_block_encoding(one_sparse_block_encoding(a), one_sparse_block_encoding(b))
    assert np.allclose(encoded_matrix(be).numpy(), _padded(a.matrix() @ b.matrix(), be.data_dim), atol=1e-9)


def test_power(rng):
    a = _random_part(rng, 4)
    be3 = power_block_encoding(one_sparse_block_encoding(a), 3)
    assert np.allclose(encoded_matrix(be3).numpy(), np.linalg.matrix_power(a.matrix(), 3), atol=1e-9)
    with pytest.raises(ValueError):
        power_block_encoding(one_sparse_block_encoding(a), 0)


def test_adjacency_encoding(small_graph):
    adj = normalized_adjacency(small_graph)
    be = matrix_block_encoding(adj)
    assert np.allclose(encoded_matrix(be).numpy(), _padded(adj, be.data_dim), atol=1e-9)
    assert check_block_norm(be) <= 1 + 1e-10


def test_reference_scalar_degree_one():
    # zero phases give the signal itself
    for lam in (-0.8, 0.0, 0.4):
        assert np.isclose(reference_qsvt_scalar([0.0, 0.0], lam), lam)
    with pytest.raises(ValueError):
        reference_qsvt_scalar([0.0], 1.5)


@pytest.mark.parametrize("degree", [1, 2, 3, 4, 5])
def test_qsvt_matches_scalar_reference(rng, triangle, degree):
    be = matrix_block_encoding(normalized_adjacency(triangle))
    phases = rng.uniform(-np.pi, np.pi, size=degree + 1)
    block = extract_encoded_block(qsvt_transform(QSVTSequence(phases, be))).numpy()
    scaled = _padded(normalized_adjacency(triangle), be.data_dim) / be.alpha
    assert np.allclose(block, apply_polynomial_to_symmetric(scaled, phases).real, atol=1e-8)


def test_mixed_parity_qsvt(rng, path2):
    be = matrix_block_encoding(normalized_adjacency(path2))
    even, odd = rng.uniform(-1, 1, size=3), rng.uniform(-1, 1, size=2)
    block = extract_encoded_block(mixed_parity_qsvt(be, even, odd, (0.6, 0.4))).numpy()
    scaled = normalized_adjacency(path2) / be.alpha
    expected = 0.6 * apply_polynomial_to_symmetric(scaled, even).real + 0.4 * apply_polynomial_to_symmetric(scaled, odd).real
    assert np.allclose(block, expected, atol=1e-8)


def test_qsvt_rejects_bad_phases(path2):
    be = matrix_block_encoding(normalized_adjacency(path2))
    with pytest.raises(ValueError):
        QSVTSequence([], be)
    with pytest.raises(ValueError):
        QSVTSequence([0.1, np.inf], be)
