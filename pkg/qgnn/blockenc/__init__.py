from .block_encoding import (
    BlockEncoding,
    check_block_norm,
    encoded_matrix,
    extract_encoded_block,
    fresh_register_name,
    workspace_residual,
)
from .one_sparse import ANGLE_BITS, assign_angle_codes, one_sparse_block_encoding
from .lcu import lcu_combine, power_block_encoding, product_block_encoding
from .qsvt import (
    QSVTSequence,
    apply_polynomial_to_symmetric,
    mixed_parity_qsvt,
    qsvt_polynomial,
    qsvt_transform,
    reference_qsvt_scalar,
)
from .matrix import decomposition_block_encoding, matrix_block_encoding
