from .graph import (
    MAX_NODES,
    UNLABELED,
    Graph,
    GraphFormatError,
    graph_from_dict,
    graph_to_dict,
    load_graph,
    make_random_graph,
)
from .matrices import LAPLACIAN_VARIANTS, graph_laplacian, graph_matrix, laplacian_scale, normalized_adjacency
from .decompose import OneSparseDecomposition, OneSparsePart, one_sparse_decompose
