import json
import logging
import os
import tempfile

import numpy as np
import pandas as pd

LOGGER = logging.getLogger(__name__)

SCHEMA_VERSION = 1
REPORT_FORMATS = ("json", "csv", "text")


def assertion(name, passed, detail="") -> dict:
    return {"name": name, "pass": bool(passed), "detail": str(detail)}


def _plain(value):
    """numpy / complex values to JSON-representable python objects."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if np.isfinite(value) else str(value)
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": float(value.real), "im": float(value.imag)}
    return value


def build_report(command, seed, fidelity=None, postselect_probability=None, inner_product=None,
                 cross_entropy=None, resources=None, assertions=(), extra=None) -> dict:
    report = {
        "schema": SCHEMA_VERSION,
        "command": command,
        "seed": int(seed),
        "fidelity": fidelity,
        "postselect_probability": postselect_probability,
        "cost": {"inner_product": inner_product, "cross_entropy": cross_entropy},
        "resources": resources,
        "assertions": list(assertions),
    }
    if extra:
        report.update(extra)
    return _plain(report)


def report_passed(report) -> bool:
    return all(item["pass"] for item in report.get("assertions", []))


def _table(report) -> pd.DataFrame:
    """Rows for csv / text output: the trade-off table when present,
    otherwise one row per assertion."""
    resources = report.get("resources") or {}
    if isinstance(resources, dict) and resources.get("rows"):
        return pd.DataFrame(resources["rows"])
    rows = [
        {"command": report["command"], "name": item["name"], "pass": item["pass"], "detail": item["detail"]}
        for item in report.get("assertions", [])
    ]
    return pd.DataFrame(rows, columns=["command", "name", "pass", "detail"])


def render_report(report, format="json") -> str:
    if format == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    if format == "csv":
        return _table(report).to_csv(index=False)
    if format == "text":
        header = [f"schema {report['schema']}  command {report['command']}  seed {report['seed']}"]
        for key in ("fidelity", "postselect_probability"):
            if report.get(key) is not None:
                header.append(f"{key}: {report[key]}")
        return "\n".join(header) + "\n" + _table(report).to_string(index=False) + "\n"
    raise ValueError(f"Unknown report format {format}, expected one of {REPORT_FORMATS}")


def emit_report(results, path, format="json"):
    """Write the report atomically: render into a temp file in the target
    directory, then rename over `path`."""
    text = render_report(results, format)
    if path is None:
        print(text, end="")
        return None
    directory = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(directory):
        raise FileNotFoundError(f"Output directory {directory} does not exist")
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".qgnn-report-")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise
    LOGGER.info("Report written to %s", path)
    return path
