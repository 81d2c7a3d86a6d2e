import logging

import numpy as np

from qgnn.blockenc.block_encoding import BlockEncoding
from qgnn.blockenc.lcu import lcu_combine
from qgnn.blockenc.one_sparse import ANGLE_BITS, one_sparse_block_encoding
from qgnn.graph import OneSparseDecomposition, one_sparse_decompose

LOGGER = logging.getLogger(__name__)


def decomposition_block_encoding(decomposition: OneSparseDecomposition, data_register="node",
                                 angle_bits=ANGLE_BITS) -> BlockEncoding:
    """Uniform LCU of the 1-sparse parts; alpha equals the part count."""
    if not decomposition.parts:
        raise ValueError("Cannot block-encode the zero matrix")
    parts = [
        one_sparse_block_encoding(part, data_register=data_register, angle_bits=angle_bits)
        for part in decomposition.parts
    ]
    be = lcu_combine(parts, np.ones(len(parts)))
    LOGGER.info("Block-encoded %dx%d matrix from %d parts on %d qubits",
                decomposition.dim, decomposition.dim, len(parts), be.layout.num_qubits)
    return be


def matrix_block_encoding(matrix, data_register="node", angle_bits=ANGLE_BITS) -> BlockEncoding:
    return decomposition_block_encoding(one_sparse_decompose(matrix), data_register, angle_bits)
