import json

import numpy as np
import pandas as pd
import pytest

from src.database.pd_db import read_table, write_json, write_rows, write_table
from src.database.schemas import CheckRow, OutputHeader


def _header():
    return OutputHeader(command="verify", config_hash="abc123", tolerances={"recurrence": 1e-7, "fd": 1e-5})


def test_table_carries_header(tmp_path):
    frame = pd.DataFrame({"r": [0.5, 1.0], "value": [np.float64(0.25), 1.0 / 3.0]})
    path = write_table(frame, tmp_path / "nested" / "dir" / "table.csv", _header())
    meta, body = read_table(path)
    assert meta["schema"] == "1"
    assert meta["command"] == "verify"
    assert meta["config_hash"] == "abc123"
    assert meta["tolerances"] == "fd=1e-05, recurrence=1e-07"
    assert list(body.columns) == ["r", "value"]
    assert body["value"].iloc[1] == pytest.approx(1.0 / 3.0, rel=1e-14)


def test_json_document(tmp_path):
    path = write_json({"modes": [], "value": 0.5 + 0.25j, "count": np.int64(3)}, tmp_path / "modes.json", _header())
    document = json.loads(path.read_text())
    assert document["header"]["schema_version"] == 1
    assert document["modes"] == []
    assert document["value"] == {"re": 0.5, "im": 0.25}
    assert document["count"] == 3
    assert list(document) == sorted(document)


def test_rows_in_both_formats(tmp_path):
    rows = [CheckRow(suite="algebra", name="commutators", residual=0.0, tolerance=1e-12, passed=True)]
    csv_path = write_rows(rows, tmp_path / "verify.csv", _header())
    assert csv_path.read_text().startswith("# schema: 1\n")
    _, body = read_table(csv_path)
    assert bool(body["passed"].iloc[0])
    json_path = write_rows(rows, tmp_path / "verify.json", _header(), fmt="json")
    assert json.loads(json_path.read_text())["rows"][0]["name"] == "commutators"
