from .features import FEATURE_REGISTER, NODE_REGISTER, feature_registers, pad_matrix, prepare_feature_state
from .pqc import (
    PQCParams,
    build_pqc_unitary,
    identity_pqc_params,
    num_angles,
    pqc_circuit,
    pqc_weight_matrix,
    random_pqc_params,
)
from .activation import ACTIVATIONS, apply_activation_elementwise, apply_idealized_activation
