from .register import RegisterLayout, Wire, max_qubits, num_qubits_for
from .gates import (
    DTYPE,
    GateOp,
    block_diagonal,
    bits_of,
    hadamard,
    is_unitary,
    pauli_x,
    pauli_z,
    ry,
    rz,
    rzz,
    swap_perm,
    xor_perm,
)
from .statevector import (
    PostSelectionError,
    StateVector,
    apply_gate,
    fidelity,
    init_basis_state,
    postselect_zero,
    sample_measurement,
    state_inner_product,
)
from .circuit import Circuit, state_preparation_block, state_preparation_circuit
