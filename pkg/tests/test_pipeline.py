import json

import pandas as pd
import pytest
import yaml

from qgnn import pipeline
from qgnn.pipeline import EXIT_ASSERTION, EXIT_CONFIG, EXIT_OK, build_parser, experiment_config, main, run_experiment
from qgnn.sim import PostSelectionError
from qgnn.utils import default_qgnn_config


def _report(path):
    with open(path) as f:
        return json.load(f)


def test_run_sgc_writes_report(tmp_path):
    out = tmp_path / "sgc.json"
    assert main(["run-sgc", "--fixture", "path-2", "--k", "2", "--seed", "7", "-o", str(out)]) == EXIT_OK
    report = _report(out)
    assert report["schema"] == 1
    assert report["command"] == "run-sgc"
    assert report["seed"] == 7
    assert report["fidelity"] >= 1 - 1e-9
    assert 0 < report["postselect_probability"] <= 1
    assert set(report["cost"]) == {"inner_product", "cross_entropy"}
    assert all(item["pass"] for item in report["assertions"])


def test_reports_are_reproducible(tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    for path in (first, second):
        assert main(["run-lgc", "--fixture", "triangle", "--seed", "3", "-o", str(path)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()


@pytest.mark.parametrize("command", ["run-gcn", "run-gat", "run-mpnn"])
def test_graph_commands(tmp_path, command):
    out = tmp_path / "report.json"
    assert main([command, "--fixture", "path-2", "-o", str(out)]) == EXIT_OK
    assert _report(out)["fidelity"] >= 1 - 1e-9


def test_graph_file(tmp_path):
    graph = {
        "nodes": [{"id": 0, "features": [1.0, 0.0], "label": 0}, {"id": 1, "features": [0.5, 0.5], "label": 1},
                  {"id": 2, "features": [0.0, 1.0], "label": 1}],
        "edges": [[0, 1], [1, 2]],
        "num_classes": 2,
    }
    path = tmp_path / "graph.json"
    path.write_text(json.dumps(graph))
    out = tmp_path / "report.json"
    assert main(["run-sgc", "--graph", str(path), "--k", "1", "-o", str(out)]) == EXIT_OK
    assert _report(out)["fidelity"] >= 1 - 1e-9


def test_estimate_formats(tmp_path):
    out = tmp_path / "tradeoff.json"
    assert main(["estimate", "--preset", "tiny", "-o", str(out)]) == EXIT_OK
    report = _report(out)
    assert report["resources"]["preset"] == "tiny"
    assert len(report["resources"]["profiles"]) == 3

    table = tmp_path / "tradeoff.csv"
    assert main(["estimate", "--preset", "sgc-large", "--report-format", "csv", "-o", str(table)]) == EXIT_OK
    frame = pd.read_csv(table)
    assert list(frame["regime"]) == ["min-depth", "moderate", "min-qubits", "classical"]


def test_report_to_stdout(capsys):
    assert main(["estimate", "--preset", "medium", "--model", "lgc"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["resources"]["model"] == "lgc"


def test_config_precedence(tmp_path):
    config = tmp_path / "config.yaml"
    config.write_text(yaml.dump({"seed": 11, "model": {"k": 1}, "graph": {"fixture": "triangle"}}))
    args = build_parser().parse_args(["run-sgc", "--config", str(config), "--k", "3"])
    cfg = experiment_config(args)
    assert cfg["seed"] == 11
    assert cfg["model"]["k"] == 3
    assert cfg["graph"]["fixture"] == "triangle"
    assert cfg["model"]["layers"] == default_qgnn_config()["model"]["layers"]


@pytest.mark.parametrize(
    "argv",
    [
        ["run-sgc", "--graph", "does-not-exist.json"],
        ["run-sgc", "--fixture", "no-such-fixture"],
        ["estimate", "--preset", "huge"],
        ["run-sgc", "--fixture", "path-2", "-o", "/no/such/dir/report.json"],
    ],
)
def test_configuration_errors(argv):
    assert main(argv) == EXIT_CONFIG


def test_malformed_config(tmp_path):
    config = tmp_path / "broken.yaml"
    config.write_text("model: [k: 1\n")
    assert main(["run-sgc", "--config", str(config)]) == EXIT_CONFIG


@pytest.mark.parametrize("error", [RuntimeError("QR completion failed"), PostSelectionError("zero branch is empty")])
def test_runtime_failures_exit_with_assertion_code(monkeypatch, error):
    def fail(cfg):
        raise error

    monkeypatch.setattr(pipeline, "run_experiment", fail)
    assert main(["run-sgc", "--fixture", "path-2"]) == EXIT_ASSERTION


def test_unknown_selector_is_rejected():
    with pytest.raises(SystemExit) as e:
        main(["verify", "everything"])
    assert e.value.code == 2


def test_verify_command(tmp_path):
    out = tmp_path / "verify.json"
    assert main(["verify", "blockenc", "-o", str(out)]) == EXIT_OK
    report = _report(out)
    assert report["selector"] == "blockenc"
    assert report["assertions"] and all(item["pass"] for item in report["assertions"])


def test_train_trace():
    cfg = default_qgnn_config()
    cfg["command"] = "train"
    cfg["training"]["epochs"] = 2
    report = run_experiment(cfg)
    assert len(report["trace"]) == 3
    assert report["cost"]["inner_product"] == report["trace"][-1]


def test_unknown_mode():
    cfg = default_qgnn_config()
    cfg["command"] = "run-sgc"
    cfg["mode"] = "fast"
    with pytest.raises(ValueError):
        run_experiment(cfg)
