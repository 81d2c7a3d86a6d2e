import numpy as np
import pytest

from qgnn.utilities import FIXTURES, assertion, build_report, load_fixture, render_report, report_passed, verify_suite
from qgnn.utils import deep_merge, load_config


def test_fixtures_load():
    for name in FIXTURES:
        g = load_fixture(name)
        assert g.num_nodes >= 2
    assert load_fixture("random-8").num_nodes == 8
    with pytest.raises(ValueError):
        load_fixture("pentagon")


def test_deep_merge():
    base = {"a": 1, "b": {"c": 2, "d": 3}}
    merged = deep_merge(base, {"b": {"c": 5}, "e": [1]})
    assert merged == {"a": 1, "b": {"c": 5, "d": 3}, "e": [1]}
    assert base["b"]["c"] == 2


def test_load_config(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_config(str(tmp_path / "missing.yaml"))
    empty = tmp_path / "empty.yaml"
    empty.write_text("")
    assert load_config(str(empty)) == {}
    scalar = tmp_path / "scalar.yaml"
    scalar.write_text("3\n")
    with pytest.raises(ValueError):
        load_config(str(scalar))


def test_report_rendering():
    report = build_report("verify", 0, fidelity=1.0, assertions=[assertion("a", True), assertion("b", False, "x")])
    assert not report_passed(report)
    assert render_report(report, "csv").splitlines()[0] == "command,name,pass,detail"
    assert "fidelity: 1.0" in render_report(report, "text")
    assert render_report(report, "json") == render_report(report, "json")
    with pytest.raises(ValueError):
        render_report(report, "xml")


def test_report_values_are_plain():
    report = build_report("run-gat", np.int64(4), fidelity=np.float64(0.5), extra={"overlap": 1 + 2j})
    assert report["seed"] == 4 and isinstance(report["fidelity"], float)
    assert report["overlap"] == {"re": 1.0, "im": 2.0}


@pytest.mark.parametrize("selector", ["blockenc", "sgc"])
def test_verify_suite(selector):
    results = verify_suite(selector)
    assert results
    assert all(item["pass"] for item in results), [item for item in results if not item["pass"]]
