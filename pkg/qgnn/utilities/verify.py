import logging

import numpy as np
from tqdm import tqdm

from qgnn.blockenc import (
    QSVTSequence,
    apply_polynomial_to_symmetric,
    encoded_matrix,
    extract_encoded_block,
    lcu_combine,
    matrix_block_encoding,
    one_sparse_block_encoding,
    product_block_encoding,
    qsvt_transform,
    reference_qsvt_scalar,
    workspace_residual,
)
from qgnn.classical import (
    ClassicalModelConfig,
    attention_scores,
    gat_reference_update,
    gcn_forward,
    lgc_forward,
    mpnn_reference_update,
    sgc_forward,
)
from qgnn.encode import PQCParams, identity_pqc_params, pad_matrix, pqc_weight_matrix
from qgnn.graph import Graph, OneSparsePart, normalized_adjacency
from qgnn.models import (
    AttentionOracleConfig,
    GatLayerConfig,
    MpnnConfig,
    QgcnConfig,
    apply_graph_attention_layer,
    apply_message_passing_layer,
    build_selective_copy,
    build_selective_lcu,
    default_unitary_family,
    feature_qubits,
    grover_eigenphases,
    make_attention_config,
    make_gat_layer_config,
    make_mpnn_config,
    make_qgcn_config,
    message_layer_layout,
    oracle_outcomes,
    run_attention_oracle,
    run_quantum_lgc,
    run_quantum_sgc,
    run_two_layer_qgcn,
    selective_copy_cascade,
    selective_lcu_cascade,
    value_code,
)
from qgnn.models.qgat import KEY_REGISTER, QUERY_REGISTER
from qgnn.models.qmpnn import SOURCE_REGISTER, TARGET_REGISTER
from qgnn.sim import num_qubits_for
from qgnn.utilities.fixtures import FIXTURES, GOLDEN_SETTINGS, load_fixture, load_goldens
from qgnn.utilities.report import assertion

LOGGER = logging.getLogger(__name__)

SELECTORS = ("blockenc", "gcn", "sgc", "lgc", "gat", "mpnn", "all")
ROUNDTRIP_TOL = 1e-9
FIDELITY_TOL = 1e-9
LGC_TOL = 1e-8
DEFAULT_LGC_PHASES = (0.3, -0.4, 0.2)


def matrix_fidelity(quantum, classical) -> float:
    """|<a|b>|^2 / (|a|^2 |b|^2) of the flattened matrices; global scale and
    phase drop out."""
    a = np.asarray(quantum).reshape(-1)
    b = np.asarray(classical).reshape(-1)
    if a.shape != b.shape:
        raise ValueError(f"Cannot compare outputs of shapes {np.shape(quantum)} and {np.shape(classical)}")
    norm = np.vdot(a, a).real * np.vdot(b, b).real
    if norm == 0:
        raise ValueError("Fidelity of an all-zero output is undefined")
    return float(abs(np.vdot(a, b)) ** 2 / norm)


def gcn_reference(g: Graph, cfg, activation="relu") -> np.ndarray:
    n = feature_qubits(g)
    weights = [pqc_weight_matrix(w, n) for w in cfg.weights]
    return gcn_forward(g, ClassicalModelConfig("gcn", weights, activation=activation)).normalized_output


def sgc_reference(g: Graph, cfg) -> np.ndarray:
    theta = pqc_weight_matrix(cfg.weights[0], feature_qubits(g))
    return sgc_forward(g, ClassicalModelConfig("sgc", [theta], k=cfg.k)).output


def lgc_reference(g: Graph, phases, theta_params, variant="normalized-shifted") -> np.ndarray:
    theta = pqc_weight_matrix(theta_params, feature_qubits(g))
    return lgc_forward(g, theta, phases=phases, variant=variant).output


def gat_reference(g: Graph, layer_cfg, att_cfg) -> np.ndarray:
    m = num_qubits_for(g.num_features)
    key, query = att_cfg.unitaries(m)
    cfg = ClassicalModelConfig("gat", [pqc_weight_matrix(layer_cfg.feature_pqc, m)], convention=att_cfg.convention,
                               t=att_cfg.t, r=layer_cfg.r, include_self=layer_cfg.include_self, key_unitary=key,
                               query_unitary=query)
    return gat_reference_update(g, cfg)


def mpnn_reference(g: Graph, cfg) -> np.ndarray:
    m = num_qubits_for(g.num_features)
    classical = ClassicalModelConfig("mpnn", r=cfg.r, unitaries=cfg.family(m),
                                     message_unitaries=cfg.message_unitaries(m))
    return mpnn_reference_update(g, classical)


def golden_configs():
    """Fixed-angle model settings the stored goldens were produced with; every
    bundled fixture has one feature qubit."""
    s = GOLDEN_SETTINGS
    weight = PQCParams(1, s["weight_angles"])
    key = s["gat_key_angles"]
    return {
        "gcn": QgcnConfig(weights=[weight, PQCParams(1, s["second_weight_angles"])]),
        "sgc": QgcnConfig(k=2, weights=[weight]),
        "lgc": QgcnConfig(weights=[weight], laplacian_variant=s["lgc_variant"]),
        "gat": (
            GatLayerConfig(weight, r=s["residual"]),
            AttentionOracleConfig(PQCParams(1, key, KEY_REGISTER), PQCParams(1, key, QUERY_REGISTER),
                                  t=s["gat_bits"], convention=s["gat_convention"]),
        ),
        "mpnn": MpnnConfig(PQCParams(1, s["mpnn_source_angles"], SOURCE_REGISTER),
                           identity_pqc_params(1, register=TARGET_REGISTER),
                           identity_pqc_params(2, register="message"),
                           unitaries=default_unitary_family(1), r=s["residual"]),
    }


def golden_reference(g: Graph, key, configs=None) -> np.ndarray:
    """Classical output under the golden settings, comparable to goldens[g.name][key]."""
    configs = configs or golden_configs()
    if key == "gcn_two_layer":
        return gcn_reference(g, configs["gcn"], configs["gcn"].activation)
    if key == "sgc_k2":
        return sgc_reference(g, configs["sgc"])
    if key == "lgc":
        cfg = configs["lgc"]
        return lgc_reference(g, GOLDEN_SETTINGS["lgc_phases"], cfg.weights[0], cfg.laplacian_variant)
    if key == "gat":
        return gat_reference(g, *configs["gat"])
    if key == "mpnn":
        return mpnn_reference(g, configs["mpnn"])
    raise ValueError(f"No golden model for {key}")


def _golden_assertion(label, g: Graph, key, goldens):
    golden = goldens[g.name][key]
    error = float(np.max(np.abs(golden_reference(g, key) - golden)))
    return assertion(f"{label}/golden[{g.name}]", error <= 1e-12, f"max error {error:.3e}")


def _padded_square(matrix, dim) -> np.ndarray:
    return pad_matrix(matrix, dim, dim)


def _random_part(rng, dim) -> OneSparsePart:
    return OneSparsePart(rng.permutation(dim), rng.uniform(-1.0, 1.0, size=dim))


def check_blockenc(seed=0):
    rng = np.random.default_rng(seed)
    results = []
    for dim in (2, 3, 5, 8):
        a, b = _random_part(rng, dim), _random_part(rng, dim)
        be_a, be_b = one_sparse_block_encoding(a), one_sparse_block_encoding(b)
        size = be_a.data_dim
        target_a, target_b = _padded_square(a.matrix(), size), _padded_square(b.matrix(), size)

        error = np.max(np.abs(encoded_matrix(be_a).numpy() - target_a))
        results.append(assertion(f"blockenc/one-sparse[{dim}]", error <= ROUNDTRIP_TOL, f"max error {error:.3e}"))

        coefficients = rng.uniform(0.2, 1.0, size=2) * rng.choice([-1.0, 1.0], size=2)
        be = lcu_combine([be_a, be_b], coefficients)
        error = np.max(np.abs(encoded_matrix(be).numpy() - (coefficients[0] * target_a + coefficients[1] * target_b)))
        alpha_ok = abs(be.alpha - np.sum(np.abs(coefficients))) <= 1e-12
        results.append(assertion(f"blockenc/lcu[{dim}]", error <= ROUNDTRIP_TOL and alpha_ok,
                                 f"max error {error:.3e}, alpha {be.alpha:.6g}"))

        be = product_block_encoding(be_a, be_b)
        error = np.max(np.abs(encoded_matrix(be).numpy() - target_a @ target_b))
        results.append(assertion(f"blockenc/product[{dim}]", error <= ROUNDTRIP_TOL, f"max error {error:.3e}"))

    for name in ("triangle", "star-4"):
        g = load_fixture(name)
        be = matrix_block_encoding(normalized_adjacency(g))
        residual = workspace_residual(be)
        results.append(assertion(f"blockenc/workspace[{name}]", residual <= 1e-12, f"residual {residual:.3e}"))
        scaled = _padded_square(normalized_adjacency(g), be.data_dim) / be.alpha
        for degree in (1, 2, 3):
            phases = rng.uniform(-np.pi, np.pi, size=degree + 1)
            block = extract_encoded_block(qsvt_transform(QSVTSequence(phases, be))).numpy()
            target = apply_polynomial_to_symmetric(scaled, phases).real
            error = np.max(np.abs(block - target))
            results.append(assertion(f"blockenc/qsvt[{name},deg={degree}]", error <= LGC_TOL,
                                     f"max error {error:.3e}"))
    lam = 0.37
    scalar = reference_qsvt_scalar([0.0, 0.0], lam)
    results.append(assertion("blockenc/qsvt-scalar", abs(scalar - lam) <= 1e-12, f"P({lam}) = {scalar:.12f}"))
    return results


def check_gcn(seed=0, fixtures=FIXTURES):
    results = []
    goldens = load_goldens()
    for name in fixtures:
        g = load_fixture(name)
        cfg = make_qgcn_config(g, num_weights=2, seed=seed)
        quantum = run_two_layer_qgcn(g, cfg).output_matrix(rows=g.num_nodes)
        fid = matrix_fidelity(quantum, gcn_reference(g, cfg, cfg.activation))
        results.append(assertion(f"gcn/fidelity[{name}]", fid >= 1 - FIDELITY_TOL, f"fidelity {fid:.12f}"))
        results.append(_golden_assertion("gcn", g, "gcn_two_layer", goldens))
    return results


def check_sgc(seed=0, fixtures=FIXTURES, k=2):
    results = []
    goldens = load_goldens()
    for name in fixtures:
        g = load_fixture(name)
        adj = normalized_adjacency(g)
        error = max(np.max(np.abs(adj - goldens[name]["normalized_adjacency"])),
                    np.max(np.abs(adj @ adj @ g.features - goldens[name]["propagated_k2"])))
        results.append(assertion(f"sgc/golden-adjacency[{name}]", error <= 1e-12, f"max error {error:.3e}"))
        results.append(_golden_assertion("sgc", g, "sgc_k2", goldens))
        cfg = make_qgcn_config(g, seed=seed, k=k)
        result = run_quantum_sgc(g, cfg)
        classical = sgc_reference(g, cfg)
        fid = matrix_fidelity(result.output_matrix(rows=g.num_nodes), classical)
        results.append(assertion(f"sgc/fidelity[{name}]", fid >= 1 - FIDELITY_TOL, f"fidelity {fid:.12f}"))
        expected = np.linalg.norm(classical) ** 2 / (result.alpha ** 2 * np.linalg.norm(g.features) ** 2)
        gap = abs(result.postselect_probability - expected)
        results.append(assertion(f"sgc/postselect[{name}]", gap <= 1e-9,
                                 f"measured {result.postselect_probability:.12f}, expected {expected:.12f}"))
    return results


def check_lgc(seed=0, fixtures=("path-2", "triangle", "star-4"), phases=DEFAULT_LGC_PHASES):
    results = []
    for name in fixtures:
        g = load_fixture(name)
        theta = make_qgcn_config(g, seed=seed).weights[0]
        quantum = run_quantum_lgc(g, phases, theta).output_matrix(rows=g.num_nodes)
        fid = matrix_fidelity(quantum, lgc_reference(g, phases, theta))
        results.append(assertion(f"lgc/fidelity[{name}]", fid >= 1 - LGC_TOL, f"fidelity {fid:.12f}"))
    goldens = load_goldens()
    for name in FIXTURES:
        results.append(_golden_assertion("lgc", load_fixture(name), "lgc", goldens))
    return results


def check_gat(seed=0, fixtures=FIXTURES, t=4, r=0.5):
    results = []
    goldens = load_goldens()
    for name in fixtures:
        g = load_fixture(name)
        att = make_attention_config(g, t=6, seed=seed)
        oracle = run_attention_oracle(att, g)
        expected = attention_scores(g.features, *att.unitaries(num_qubits_for(g.num_features)))
        outcomes = oracle_outcomes(oracle, g)
        exact = all(
            outcomes[i, j][0] == value_code(expected[i, j], att.convention, att.t) and outcomes[i, j][1] >= 1 - 1e-9
            for i in range(g.num_nodes) for j in range(g.num_nodes)
        )
        clean = min(outcome[2] for outcome in outcomes.values())
        results.append(assertion(f"gat/oracle[{name}]", exact and clean >= 1 - 1e-9,
                                 f"codes exact: {exact}, work registers clean: {clean:.12f}"))
        theta = oracle.records[0, g.num_nodes - 1].theta
        phases = grover_eigenphases(att, g, 0, g.num_nodes - 1)
        gap = float(np.max(np.abs(np.abs(phases) - 2 * theta)))
        results.append(assertion(f"gat/grover[{name}]", gap <= 1e-9, f"eigenphase error {gap:.3e}"))

        layer_att = make_attention_config(g, t=t, seed=seed)
        layer_cfg = make_gat_layer_config(g, seed=seed + 7, r=r)
        quantum = apply_graph_attention_layer(g, layer_cfg, layer_att).output_matrix(rows=g.num_nodes)
        fid = matrix_fidelity(quantum, gat_reference(g, layer_cfg, layer_att))
        results.append(assertion(f"gat/fidelity[{name}]", fid >= 1 - FIDELITY_TOL, f"fidelity {fid:.12f}"))
        results.append(_golden_assertion("gat", g, "gat", goldens))

    edgeless = Graph(2, [], [[1.0, 0.0], [0.0, 1.0]], name="edgeless")
    layer_att = make_attention_config(edgeless, t=t, seed=seed)
    layer_cfg = make_gat_layer_config(edgeless, seed=seed + 7, r=r)
    quantum = apply_graph_attention_layer(edgeless, layer_cfg, layer_att).output_matrix(rows=2)
    fid = matrix_fidelity(quantum, gat_reference(edgeless, layer_cfg, layer_att))
    results.append(assertion("gat/fidelity[edgeless]", fid >= 1 - FIDELITY_TOL, f"fidelity {fid:.12f}"))

    for width in (1, 2):
        structured = build_selective_copy(width, 2).unitary()
        cascade = selective_copy_cascade(width, 2).unitary()
        error = float(np.max(np.abs((structured - cascade).numpy())))
        results.append(assertion(f"gat/selective-copy[{width}]", error == 0.0, f"max difference {error:.3e}"))
    return results


def check_mpnn(seed=0, fixtures=FIXTURES, r=0.5):
    results = []
    goldens = load_goldens()
    for name in fixtures:
        g = load_fixture(name)
        cfg = make_mpnn_config(g, seed=seed, r=r)
        quantum = apply_message_passing_layer(g, cfg).output_matrix(rows=g.num_nodes)
        fid = matrix_fidelity(quantum, mpnn_reference(g, cfg))
        results.append(assertion(f"mpnn/fidelity[{name}]", fid >= 1 - FIDELITY_TOL, f"fidelity {fid:.12f}"))
        results.append(_golden_assertion("mpnn", g, "mpnn", goldens))

    g = load_fixture("path-2")
    cfg = make_mpnn_config(g, seed=seed)
    layout = message_layer_layout(g)
    error = float(np.max(np.abs((build_selective_lcu(cfg, layout).unitary()
                                 - selective_lcu_cascade(cfg, layout).unitary()).numpy())))
    results.append(assertion("mpnn/selective-lcu", error <= 1e-12, f"max difference {error:.3e}"))
    return results


CHECKS = {
    "blockenc": check_blockenc,
    "gcn": check_gcn,
    "sgc": check_sgc,
    "lgc": check_lgc,
    "gat": check_gat,
    "mpnn": check_mpnn,
}


def verify_suite(selector="all", seed=0, progress=False):
    """Run the invariant checks for one module (or all of them) on the
    bundled fixtures and return their assertion records."""
    if selector not in SELECTORS:
        raise ValueError(f"Unknown verify selector {selector}, expected one of {SELECTORS}")
    names = list(CHECKS) if selector == "all" else [selector]
    results = []
    for name in tqdm(names, desc="verify", disable=not progress):
        checks = CHECKS[name](seed=seed)
        failed = [item["name"] for item in checks if not item["pass"]]
        LOGGER.info("verify %s: %d checks, %d failed", name, len(checks), len(failed))
        for item in failed:
            LOGGER.warning("FAILED %s", item)
        results.extend(checks)
    return results
