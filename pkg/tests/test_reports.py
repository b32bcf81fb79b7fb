import json
import math

import pandas as pd
import pytest

from src.errors import FormatError
from src.experiments.report import ExperimentReport, Verdict


def make_report() -> ExperimentReport:
    report = ExperimentReport("demo", parameters={"s_values": (2, 3)}, seed=7)
    report.measure("ratio_s2", 1.5)
    report.measure("ratio_s3", 4.5)
    report.measure("bound", 3.0)
    report.check("grows", "ratio_s3", ">=", 3.0)
    report.check("below", "ratio_s2", "<=", "bound")
    report.add_row(s=2, ratio=1.5)
    report.add_row(s=3, ratio=4.5, note="large")
    return report


def test_verdicts():
    assert Verdict("v", "a", "<", 1.0).evaluate({"a": 0.5})
    assert not Verdict("v", "a", "<=", "b").evaluate({"a": 2.0, "b": 1.0})
    assert not Verdict("v", "a", ">=", 0.0).evaluate({"a": math.nan})
    with pytest.raises(FormatError):
        Verdict("v", "a", "~", 1.0)


def test_recheck_detects_edits():
    report = make_report()
    assert report.passed
    assert report.recheck()
    report.measured["ratio_s3"] = 1.0
    assert not report.recheck()


def test_json_is_reproducible():
    first, second = make_report(), make_report()
    second.runtime_s = 12.5
    assert first.to_json() == second.to_json()
    payload = json.loads(second.to_json(include_runtime=True))
    assert payload["runtime_s"] == 12.5
    assert payload["rules"]["below"] == {"lhs": "ratio_s2", "op": "<=", "rhs": "bound"}
    assert payload["parameters"]["s_values"] == [2, 3]
    assert payload["passed"] is True


def test_save_with_tables(tmp_path):
    report = make_report()
    paths = report.save(tmp_path / "out" / "demo.json", csv=True)
    assert [p.name for p in paths] == ["demo.json", "demo_rows.csv", "demo_measured.csv"]

    rows = pd.read_csv(paths[1])
    assert list(rows.columns) == ["s", "ratio", "note"]
    assert rows["ratio"].tolist() == [1.5, 4.5]

    measured = pd.read_csv(paths[2])
    assert dict(zip(measured["metric"], measured["value"])) == report.measured
    assert json.loads(paths[0].read_text())["experiment"] == "demo"
