from .qgcn import (
    PipelineResult,
    QgcnConfig,
    adjacency_block_encoding,
    apply_graph_convolution_layer,
    estimate_cost_hadamard,
    exact_cost,
    feature_qubits,
    hadamard_shots,
    hadamard_test_circuit,
    infer_node_labels,
    inner_product_cost,
    laplacian_block_encoding,
    lgc_block_encoding,
    make_qgcn_config,
    output_register_state,
    prepare_label_state,
    propagated_state,
    run_qgcn,
    run_quantum_lgc,
    run_quantum_sgc,
    run_two_layer_qgcn,
    state_circuit,
    train_finite_difference,
)
from .addressing import ADDRESS_REGISTERS, diagonal_feature_matrix, prepare_address_state, project_address_diagonal
from .qgat import (
    AttentionLayerResult,
    AttentionOracle,
    AttentionOracleConfig,
    AttentionScoreRecord,
    GatLayerConfig,
    apply_graph_attention_layer,
    attention_score_records,
    build_grover_operator,
    build_o_diagonal,
    build_selective_copy,
    build_swap_test_unitary,
    code_value,
    conditional_rotation_encode,
    grover_eigenphases,
    make_attention_config,
    make_gat_layer_config,
    oracle_outcomes,
    run_attention_oracle,
    selective_copy_cascade,
    value_code,
)
from .qmpnn import (
    MessagePassingResult,
    MpnnConfig,
    apply_message_passing_layer,
    build_message_unitary,
    build_selective_lcu,
    default_unitary_family,
    make_mpnn_config,
    message_layer_layout,
    selective_lcu_cascade,
)
