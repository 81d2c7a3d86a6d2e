import numpy as np
import pytest
import torch

from qgnn.encode import (
    apply_idealized_activation,
    build_pqc_unitary,
    identity_pqc_params,
    num_angles,
    pad_matrix,
    pqc_circuit,
    pqc_weight_matrix,
    prepare_feature_state,
    random_pqc_params,
)
from qgnn.sim import RegisterLayout, StateVector, is_unitary


def test_feature_state_amplitudes(star4):
    layout = RegisterLayout.of(("node", 2), ("feature", 1))
    state = prepare_feature_state(star4.features, layout)
    matrix = state.amplitude_matrix().numpy().real
    assert np.allclose(matrix, star4.features / np.linalg.norm(star4.features))


def test_feature_state_rejects_zero_and_overflow():
    layout = RegisterLayout.of(("node", 1), ("feature", 1))
    with pytest.raises(ValueError):
        prepare_feature_state(np.zeros((2, 2)), layout)
    with pytest.raises(ValueError):
        prepare_feature_state(np.ones((3, 2)), layout)


def test_pad_matrix():
    out = pad_matrix(np.ones((2, 1)), 4, 2)
    assert out.shape == (4, 2)
    assert out.sum() == 2
    with pytest.raises(ValueError):
        pad_matrix(np.ones((3, 3)), 2, 2)


@pytest.mark.parametrize("n_qubits", [1, 2, 3])
def test_pqc_is_unitary(n_qubits):
    params = random_pqc_params(n_qubits, layers=2, seed=n_qubits)
    assert len(params.angles) == num_angles(n_qubits, 2)
    assert is_unitary(build_pqc_unitary(params, n_qubits))


def test_identity_pqc():
    assert np.allclose(build_pqc_unitary(identity_pqc_params(2), 2), np.eye(4))


def test_pqc_angle_count_mismatch():
    with pytest.raises(ValueError):
        build_pqc_unitary(random_pqc_params(2, seed=0), 3)


def test_amplitude_matrix_transforms_with_transpose(rng):
    """The PQC on the feature register maps the amplitude matrix H to H U^T."""
    h = rng.normal(size=(2, 4))
    params = random_pqc_params(2, seed=5)
    layout = RegisterLayout.of(("node", 1), ("feature", 2))
    state = prepare_feature_state(h, layout)
    out = pqc_circuit(params, layout).run(state).amplitude_matrix().numpy()
    expected = h @ pqc_weight_matrix(params, 2) / np.linalg.norm(h)
    assert np.allclose(out, expected, atol=1e-12)


def test_relu_activation_renormalizes():
    layout = RegisterLayout.of(("q", 2))
    state = StateVector(layout, np.array([0.5, -0.5, 0.5, -0.5]))
    out = apply_idealized_activation(state, "relu")
    assert np.allclose(out.amplitudes.numpy(), np.array([1, 0, 1, 0]) / np.sqrt(2))


def test_activation_on_all_negative_state_fails():
    layout = RegisterLayout.of(("q", 1))
    with pytest.raises(ValueError):
        apply_idealized_activation(StateVector(layout, torch.tensor([-1.0, 0.0])), "relu")
    with pytest.raises(ValueError):
        apply_idealized_activation(StateVector(layout, torch.tensor([1.0, 0.0])), "softplus")
