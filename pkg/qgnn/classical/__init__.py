from .gnn import (
    CONVENTIONS,
    VARIANTS,
    ClassicalModelConfig,
    ForwardResult,
    attention_scores,
    attention_support,
    gat_reference_update,
    gcn_forward,
    lgc_encoding_scale,
    lgc_filter,
    lgc_forward,
    message_weights,
    mpnn_message_aggregate,
    mpnn_reference_update,
    normalized_rows,
    phase_aligned_real,
    round_score,
    row_softmax,
    sgc_forward,
)
from .loss import cross_entropy_cost
from .naive import (
    naive_gat_update,
    naive_gcn_forward,
    naive_lgc_forward,
    naive_mpnn_update,
    naive_normalized_adjacency,
    naive_sgc_forward,
)
