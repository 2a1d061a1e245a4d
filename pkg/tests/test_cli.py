import json

import pytest
from click.testing import CliRunner

from src.api.cli import cli
from src.config.settings import settings


@pytest.fixture
def runner():
    return CliRunner()


def test_version(runner):
    result = runner.invoke(cli, ["--version"])
    assert result.exit_code == 0
    assert settings.VERSION in result.output


def test_verify_algebra(runner):
    result = runner.invoke(cli, ["verify", "--suite", "algebra", "--no-color"])
    assert result.exit_code == 0, result.output
    assert "[PASS] algebra/" in result.output
    assert "FAIL" not in result.output
    assert "\033[" not in result.output


@pytest.mark.parametrize("args", [["--suite", "none"], ["--twoj", "2"], ["--j", "1/3"], ["--A", "abc"]])
def test_verify_usage_errors(runner, args):
    result = runner.invoke(cli, ["verify", *args])
    assert result.exit_code == 2


def test_verify_report(runner, tmp_path):
    result = runner.invoke(cli, ["verify", "--suite", "algebra", "--no-color", "--out", str(tmp_path)])
    assert result.exit_code == 0, result.output
    report = (tmp_path / "verify.csv").read_text()
    assert report.startswith("# schema: 1\n# command: verify\n")


def test_malformed_catalog_is_a_usage_error(runner, tmp_path):
    catalog = tmp_path / "bad.yaml"
    catalog.write_text("observables:\n  - name: ok\n  - name: broken\n    bispinor: gamma9\n")
    result = runner.invoke(cli, ["matelem", "--observables", str(catalog), "--out", str(tmp_path)])
    assert result.exit_code == 2
    assert "observables[1]" in result.output


def test_gauge_table_is_deterministic(runner, tmp_path):
    args = ["gauge-table", "--profile", "bps", "--out", str(tmp_path)]
    assert runner.invoke(cli, args).exit_code == 0
    first = (tmp_path / "gauge_table.csv").read_bytes()
    assert runner.invoke(cli, args).exit_code == 0
    assert (tmp_path / "gauge_table.csv").read_bytes() == first


def test_spectrum_with_empty_window(runner, tmp_path):
    result = runner.invoke(
        cli,
        ["spectrum", "--eps-min", "0.5", "--eps-max", "0.4", "--radial-points", "32", "--out", str(tmp_path)],
    )
    assert result.exit_code == 0, result.output
    assert (tmp_path / "solutions.csv").read_text().startswith("# schema: 1")
    document = json.loads((tmp_path / "modes.json").read_text())
    assert document["modes"] == []
    assert document["case"] == "reduced_W0"
    assert document["header"]["command"] == "spectrum"


def test_matelem(runner, tmp_path):
    result = runner.invoke(
        cli, ["matelem", "--A", "0.3", "--quad-theta", "24", "--quad-phi", "8", "--format", "json", "--out", str(tmp_path)]
    )
    assert result.exit_code == 0, result.output
    rows = json.loads((tmp_path / "matelem.json").read_text())["rows"]
    assert len(rows) == 5 * 16


def test_unwritable_output_exits_3(runner, tmp_path):
    blocker = tmp_path / "file.txt"
    blocker.write_text("x")
    result = runner.invoke(cli, ["gauge-table", "--out", str(blocker / "sub")])
    assert result.exit_code == 3
