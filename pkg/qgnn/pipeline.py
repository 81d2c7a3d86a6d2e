import argparse
import logging
import sys

import numpy as np
import yaml

from qgnn.classical import cross_entropy_cost, row_softmax
from qgnn.graph import GraphFormatError, load_graph
from qgnn.models import (
    apply_graph_attention_layer,
    apply_message_passing_layer,
    estimate_cost_hadamard,
    inner_product_cost,
    make_attention_config,
    make_gat_layer_config,
    make_mpnn_config,
    make_qgcn_config,
    oracle_outcomes,
    output_register_state,
    prepare_label_state,
    run_attention_oracle,
    run_qgcn,
    run_quantum_lgc,
    run_quantum_sgc,
    state_circuit,
    train_finite_difference,
)
from qgnn.resources import REGIMES, preset_inputs, tradeoff_report
from qgnn.sim import PostSelectionError
from qgnn.utilities import (
    REPORT_FORMATS,
    SELECTORS,
    assertion,
    build_report,
    emit_report,
    gat_reference,
    gcn_reference,
    lgc_reference,
    load_fixture,
    matrix_fidelity,
    mpnn_reference,
    report_passed,
    sgc_reference,
    verify_suite,
)
from qgnn.utils import deep_merge, default_qgnn_config, load_config, seed_everything

LOGGER = logging.getLogger(__name__)

COMMANDS = ("run-gcn", "run-sgc", "run-lgc", "run-gat", "run-mpnn", "train", "estimate", "verify")
MODES = ("exact", "sampled")

EXIT_OK = 0
EXIT_ASSERTION = 1
EXIT_CONFIG = 2


def load_experiment_graph(cfg):
    graph_cfg = cfg["graph"]
    if graph_cfg.get("path"):
        return load_graph(graph_cfg["path"], graph_cfg.get("format"), graph_cfg.get("features_path"),
                          graph_cfg.get("labels_path"))
    return load_fixture(graph_cfg["fixture"])


def _has_labels(g):
    return g.labels is not None and len(g.labeled_nodes) > 0


def _classification_costs(g, state, matrix, cfg):
    """Inner-product cost against the label state (exact or Hadamard-test
    sampled) and the cross-entropy of the row softmax."""
    if not _has_labels(g):
        return None, None
    label_state = prepare_label_state(g)
    if cfg["mode"] == "sampled":
        training = cfg["training"]
        inner = estimate_cost_hadamard(state_circuit(output_register_state(state)), state_circuit(label_state),
                                       training["epsilon"], training["delta"], cfg["seed"], training["shots"])
    else:
        inner = inner_product_cost(state, label_state)
    probabilities = row_softmax(matrix[:, : g.num_classes])
    return float(inner), cross_entropy_cost(probabilities, g)


def _fidelity_assertion(name, fid, tol):
    return assertion(f"{name}/fidelity", fid >= 1 - tol, f"fidelity {fid:.12f}")


def _qgcn_config(g, cfg, num_weights=1):
    model, training = cfg["model"], cfg["training"]
    return make_qgcn_config(g, num_weights=num_weights, layers=model["pqc_layers"], seed=cfg["seed"],
                            identity=model["identity_weights"], k=model["k"], activation=model["activation"],
                            shots=training["shots"], epsilon=training["epsilon"], delta=training["delta"],
                            laplacian_variant=model["laplacian_variant"])


def run_gcn(g, cfg):
    qcfg = _qgcn_config(g, cfg, num_weights=cfg["model"]["layers"])
    result = run_qgcn(g, qcfg)
    matrix = result.output_matrix(rows=g.num_nodes)
    fid = matrix_fidelity(matrix, gcn_reference(g, qcfg, qcfg.activation))
    inner, entropy = _classification_costs(g, result.state, matrix, cfg)
    return build_report("run-gcn", cfg["seed"], fid, result.postselect_probability, inner, entropy,
                        assertions=[_fidelity_assertion("gcn", fid, cfg["tolerance"]["fidelity"])],
                        extra={"num_qubits": result.num_qubits, "alpha": result.alpha})


def run_sgc(g, cfg):
    qcfg = _qgcn_config(g, cfg)
    result = run_quantum_sgc(g, qcfg)
    matrix = result.output_matrix(rows=g.num_nodes)
    classical = sgc_reference(g, qcfg)
    fid = matrix_fidelity(matrix, classical)
    expected = float(np.linalg.norm(classical) ** 2 / (result.alpha ** 2 * np.linalg.norm(g.features) ** 2))
    inner, entropy = _classification_costs(g, result.state, matrix, cfg)
    assertions = [
        _fidelity_assertion("sgc", fid, cfg["tolerance"]["fidelity"]),
        assertion("sgc/postselect", abs(result.postselect_probability - expected) <= 1e-9,
                  f"measured {result.postselect_probability:.12f}, expected {expected:.12f}"),
    ]
    return build_report("run-sgc", cfg["seed"], fid, result.postselect_probability, inner, entropy,
                        assertions=assertions, extra={"num_qubits": result.num_qubits, "alpha": result.alpha,
                                                      "k": qcfg.k})


def run_lgc(g, cfg):
    qcfg = _qgcn_config(g, cfg)
    phases = [float(phi) for phi in cfg["model"]["phases"]]
    theta = qcfg.weights[0]
    result = run_quantum_lgc(g, phases, theta, qcfg.laplacian_variant)
    matrix = result.output_matrix(rows=g.num_nodes)
    fid = matrix_fidelity(matrix, lgc_reference(g, phases, theta, qcfg.laplacian_variant))
    inner, entropy = _classification_costs(g, result.state, matrix, cfg)
    tol = max(cfg["tolerance"]["fidelity"], 1e-8)
    return build_report("run-lgc", cfg["seed"], fid, result.postselect_probability, inner, entropy,
                        assertions=[_fidelity_assertion("lgc", fid, tol)],
                        extra={"num_qubits": result.num_qubits, "phases": phases})


def run_gat(g, cfg):
    model, oracle_cfg = cfg["model"], cfg["oracle"]
    att = make_attention_config(g, t=oracle_cfg["t"], seed=cfg["seed"], layers=model["pqc_layers"],
                                mode=oracle_cfg["mode"], convention=oracle_cfg["convention"],
                                identity=model["identity_weights"])
    layer = make_gat_layer_config(g, seed=cfg["seed"] + 7, layers=model["pqc_layers"], r=model["r"],
                                  include_self=model["include_self"], identity=model["identity_weights"])
    oracle = run_attention_oracle(att, g)
    outcomes = oracle_outcomes(oracle, g)
    stored = all(outcomes[key][0] == oracle.records[key].code for key in outcomes)
    clean = min(outcome[2] for outcome in outcomes.values())

    result = apply_graph_attention_layer(g, layer, att)
    fid = matrix_fidelity(result.output_matrix(rows=g.num_nodes), gat_reference(g, layer, att))
    assertions = [
        _fidelity_assertion("gat", fid, cfg["tolerance"]["fidelity"]),
        assertion("gat/oracle-codes", stored, f"{len(outcomes)} node pairs"),
        assertion("gat/oracle-work-clean", clean >= 1 - 1e-9, f"min clean probability {clean:.12f}"),
    ]
    scores = {f"{i},{j}": record.value for (i, j), record in sorted(oracle.records.items())}
    return build_report("run-gat", cfg["seed"], fid, result.postselect_probability, assertions=assertions,
                        extra={"num_qubits": result.num_qubits, "diagonal_probability": result.diagonal_probability,
                               "oracle_mode": att.mode, "convention": att.convention, "t": att.t,
                               "scores": scores})


def run_mpnn(g, cfg):
    model = cfg["model"]
    mcfg = make_mpnn_config(g, layers=model["pqc_layers"], seed=cfg["seed"], identity=model["identity_weights"],
                            r=model["r"])
    result = apply_message_passing_layer(g, mcfg)
    fid = matrix_fidelity(result.output_matrix(rows=g.num_nodes), mpnn_reference(g, mcfg))
    return build_report("run-mpnn", cfg["seed"], fid, result.postselect_probability,
                        assertions=[_fidelity_assertion("mpnn", fid, cfg["tolerance"]["fidelity"])],
                        extra={"num_qubits": result.num_qubits, "diagonal_probability": result.diagonal_probability})


def run_train(g, cfg):
    training = cfg["training"]
    qcfg = _qgcn_config(g, cfg)
    _, trace = train_finite_difference(g, qcfg, training["epochs"], training["learning_rate"], cfg["mode"],
                                       training["step"], cfg["model"]["pqc_layers"], progress=True)
    improved = training["epochs"] == 0 or min(trace[1:]) < trace[0]
    return build_report("train", cfg["seed"], inner_product=trace[-1],
                        assertions=[assertion("train/improves", improved,
                                              f"initial {trace[0]:.8f}, best {min(trace):.8f}")],
                        extra={"trace": trace, "mode": cfg["mode"]})


def run_estimate(cfg):
    estimate = cfg["estimate"]
    report = tradeoff_report(preset_inputs(estimate["preset"]), estimate["model"])
    depth = {p.regime: p.depth for p in report.profiles}
    qubits = {p.regime: p.qubits for p in report.profiles}
    ordered = list(REGIMES)
    assertions = [
        assertion("estimate/depth-order", all(depth[a] <= depth[b] for a, b in zip(ordered, ordered[1:])),
                  ", ".join(f"{r}={depth[r]:.6g}" for r in ordered)),
        assertion("estimate/qubit-order", all(qubits[a] >= qubits[b] for a, b in zip(ordered, ordered[1:])),
                  ", ".join(f"{r}={qubits[r]:.6g}" for r in ordered)),
    ]
    resources = {**report.to_dict(), "rows": report.rows(), "preset": estimate["preset"]}
    return build_report("estimate", cfg["seed"], resources=resources, assertions=assertions)


def run_verify(cfg):
    results = verify_suite(cfg["verify"]["selector"], cfg["seed"], progress=True)
    return build_report("verify", cfg["seed"], assertions=results, extra={"selector": cfg["verify"]["selector"]})


GRAPH_RUNNERS = {
    "run-gcn": run_gcn,
    "run-sgc": run_sgc,
    "run-lgc": run_lgc,
    "run-gat": run_gat,
    "run-mpnn": run_mpnn,
    "train": run_train,
}


def run_experiment(cfg):
    """Run one command on a merged configuration and return its report."""
    command = cfg["command"]
    if command not in COMMANDS:
        raise ValueError(f"Unknown command {command}, expected one of {COMMANDS}")
    if cfg["mode"] not in MODES:
        raise ValueError(f"Unknown mode {cfg['mode']}, expected one of {MODES}")
    seed_everything(cfg["seed"])
    if command == "estimate":
        return run_estimate(cfg)
    if command == "verify":
        return run_verify(cfg)
    g = load_experiment_graph(cfg)
    LOGGER.info("Running %s on %s", command, g)
    return GRAPH_RUNNERS[command](g, cfg)


def build_parser():
    parser = argparse.ArgumentParser(prog="qgnn", description="Statevector simulation of quantum graph neural networks")
    subparsers = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, default=None, help="YAML file merged over the defaults")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("-o", "--output", type=str, default=None, help="Report path; stdout when omitted")
    common.add_argument("--report-format", type=str, default=None, choices=REPORT_FORMATS)
    common.add_argument("-v", "--verbose", action="store_true", help="Log at DEBUG level")

    graph = argparse.ArgumentParser(add_help=False)
    graph.add_argument("--graph", type=str, default=None, help="Graph file (JSON, or TSV edge list)")
    graph.add_argument("--format", type=str, default=None, choices=["json", "tsv"])
    graph.add_argument("--features", type=str, default=None, help="Features CSV for a TSV edge list")
    graph.add_argument("--labels", type=str, default=None, help="Labels CSV for a TSV edge list")
    graph.add_argument("--fixture", type=str, default=None, help="Bundled graph used when --graph is absent")
    graph.add_argument("--mode", type=str, default=None, choices=MODES)
    graph.add_argument("--k", type=int, default=None, help="Propagation steps of the SGC")
    graph.add_argument("--layers", type=int, default=None, help="QGCN layers")
    graph.add_argument("--pqc-layers", type=int, default=None)
    graph.add_argument("--identity-weights", action="store_true", default=None)
    graph.add_argument("--r", type=float, default=None, help="Self-term weight of the GAT / MPNN update")

    for command in COMMANDS:
        parents = [common] if command in ("estimate", "verify") else [common, graph]
        sub = subparsers.add_parser(command, parents=parents)
        if command == "run-gat":
            sub.add_argument("--t", type=int, default=None, help="Bits of the stored attention score")
            sub.add_argument("--oracle-mode", type=str, default=None, choices=["idealized-qpe", "full-circuit-qpe"])
            sub.add_argument("--convention", type=str, default=None, choices=["magnitude-squared", "signed-real"])
        if command == "train":
            sub.add_argument("--epochs", type=int, default=None)
            sub.add_argument("--learning-rate", type=float, default=None)
            sub.add_argument("--shots", type=int, default=None)
        if command == "estimate":
            sub.add_argument("--preset", type=str, default=None)
            sub.add_argument("--model", type=str, default=None, choices=["sgc", "lgc"])
        if command == "verify":
            sub.add_argument("selector", nargs="?", default="all", choices=SELECTORS)
    return parser


# (argparse destination, config section or None for top level, config key)
FLAG_TARGETS = [
    ("seed", None, "seed"),
    ("mode", None, "mode"),
    ("output", "output", "path"),
    ("report_format", "output", "format"),
    ("graph", "graph", "path"),
    ("format", "graph", "format"),
    ("features", "graph", "features_path"),
    ("labels", "graph", "labels_path"),
    ("fixture", "graph", "fixture"),
    ("k", "model", "k"),
    ("layers", "model", "layers"),
    ("pqc_layers", "model", "pqc_layers"),
    ("identity_weights", "model", "identity_weights"),
    ("r", "model", "r"),
    ("t", "oracle", "t"),
    ("oracle_mode", "oracle", "mode"),
    ("convention", "oracle", "convention"),
    ("epochs", "training", "epochs"),
    ("learning_rate", "training", "learning_rate"),
    ("shots", "training", "shots"),
    ("preset", "estimate", "preset"),
    ("model", "estimate", "model"),
]


def experiment_config(args):
    """Defaults, then the YAML file, then explicit flags."""
    cfg = default_qgnn_config()
    if args.config is not None:
        cfg = deep_merge(cfg, load_config(args.config))
    overrides = {}
    for dest, section, key in FLAG_TARGETS:
        value = getattr(args, dest, None)
        if value is None:
            continue
        if section is None:
            overrides[key] = value
        else:
            overrides.setdefault(section, {})[key] = value
    cfg = deep_merge(cfg, overrides)
    cfg["command"] = args.command
    cfg["verify"] = {"selector": getattr(args, "selector", "all")}
    return cfg


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    try:
        cfg = experiment_config(args)
        report = run_experiment(cfg)
    except (FileNotFoundError, GraphFormatError, yaml.YAMLError) as e:
        LOGGER.error("%s", e)
        return EXIT_CONFIG
    except PostSelectionError as e:
        LOGGER.error("Post-selection failed: %s", e)
        return EXIT_ASSERTION
    except RuntimeError as e:
        LOGGER.error("Run aborted: %s", e)
        return EXIT_ASSERTION
    except ValueError as e:
        LOGGER.error("Invalid configuration: %s", e)
        return EXIT_CONFIG
    try:
        emit_report(report, cfg["output"]["path"], cfg["output"]["format"])
    except OSError as e:
        LOGGER.error("Could not write the report: %s", e)
        return EXIT_CONFIG
    if not report_passed(report):
        failed = [item["name"] for item in report["assertions"] if not item["pass"]]
        LOGGER.error("Failed assertions: %s", ", ".join(failed))
        return EXIT_ASSERTION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
