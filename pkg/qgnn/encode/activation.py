import torch

from qgnn.sim import StateVector

ACTIVATIONS = {
    "relu": torch.relu,
    "tanh": torch.tanh,
    "none": None,
}


def activation_fn(name):
    if name not in ACTIVATIONS:
        raise ValueError(f"Unknown activation {name}, expected one of {sorted(ACTIVATIONS)}")
    return ACTIVATIONS[name]


def apply_activation_elementwise(values: torch.Tensor, name) -> torch.Tensor:
    """sigma on the real and imaginary parts separately."""
    fn = activation_fn(name)
    if fn is None:
        return values
    if values.is_complex():
        return torch.complex(fn(values.real), fn(values.imag))
    return fn(values)


def apply_idealized_activation(state: StateVector, function="none") -> StateVector:
    """Amplitude-level nonlinearity followed by global renormalization."""
    if activation_fn(function) is None:
        return state
    values = apply_activation_elementwise(state.amplitudes, function)
    norm = torch.linalg.norm(values)
    if norm == 0:
        raise ValueError(f"Activation {function} mapped every amplitude to zero")
    return StateVector(state.layout, values / norm)
