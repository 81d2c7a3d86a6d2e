import numpy as np

from qgnn.sim import RegisterLayout, StateVector, num_qubits_for

NODE_REGISTER = "node"
FEATURE_REGISTER = "feature"


def feature_registers(num_nodes, num_features, node_register=NODE_REGISTER, feature_register=FEATURE_REGISTER):
    return ((node_register, num_qubits_for(num_nodes)), (feature_register, num_qubits_for(num_features)))


def pad_matrix(matrix, rows, cols) -> np.ndarray:
    matrix = np.asarray(matrix)
    if matrix.shape[0] > rows or matrix.shape[1] > cols:
        raise ValueError(f"Matrix of shape {matrix.shape} does not fit into {rows}x{cols}")
    out = np.zeros((rows, cols), dtype=matrix.dtype)
    out[: matrix.shape[0], : matrix.shape[1]] = matrix
    return out


def prepare_feature_state(features, layout: RegisterLayout, node_register=NODE_REGISTER,
                          feature_register=FEATURE_REGISTER) -> StateVector:
    """Amplitude-encode X: basis |i>|k> carries X[i, k] / ||X||_F, every other
    register in |0>."""
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 2:
        raise ValueError(f"Expected an N x C feature matrix, got shape {features.shape}")
    if not np.any(features):
        raise ValueError("Cannot encode an all-zero feature matrix")
    rows = 1 << layout.size(node_register)
    cols = 1 << layout.size(feature_register)
    if features.shape[0] > rows or features.shape[1] > cols:
        raise ValueError(
            f"Feature matrix {features.shape} overflows registers {node_register}({rows}) x {feature_register}({cols})"
        )
    padded = pad_matrix(features, rows, cols)
    return StateVector.from_register_amplitudes(layout, [node_register, feature_register], padded)
