import pandas as pd
import pytest
from typer.testing import CliRunner

from main import app
from src.bench.reporting import METRICS_FILE

runner = CliRunner()


@pytest.fixture(scope="module")
def generated(tmp_path_factory):
    data_dir = tmp_path_factory.mktemp("cli-data")
    result = runner.invoke(app, [
        "generate", "2004", "2011",
        "--customers", "200", "--rows-per-customer", "8", "--default-rate", "0.02", "--seed", "3",
        "--data-dir", str(data_dir),
    ])
    assert result.exit_code == 0, result.output
    return data_dir


@pytest.fixture(scope="module")
def config_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli-config") / "experiment.yaml"
    path.write_text(
        "vintages: [2004]\n"
        "customer_sample: 200\n"
        "feature_selection:\n  enabled: false\n"
        "models:\n  - kind: NB\n  - kind: DT\n    hyper_params:\n      max_depth: 3\n",
        encoding="utf-8",
    )
    return path


def test_generate_writes_both_files(generated):
    names = sorted(path.name for path in generated.iterdir())
    assert names == ["sample_orig_2004.txt", "sample_orig_2011.txt", "sample_svcg_2004.txt", "sample_svcg_2011.txt"]


def test_generate_rejects_bad_year(tmp_path):
    result = runner.invoke(app, ["generate", "1990", "--data-dir", str(tmp_path)])
    assert result.exit_code == 1


def test_run_and_report(generated, config_file, tmp_path):
    output = tmp_path / "out"
    result = runner.invoke(app, [
        "run", "--config", str(config_file), "--data-dir", str(generated), "--output-dir", str(output),
        "--set", "seed=5", "--log-level", "WARNING",
    ])
    assert result.exit_code == 0, result.output
    metrics = pd.read_csv(output / METRICS_FILE)
    assert metrics["label"].tolist() == ["NB", "NB-R", "DT", "DT-R"]

    rebuilt = tmp_path / "rebuilt"
    result = runner.invoke(app, ["report", str(output), "--output-dir", str(rebuilt)])
    assert result.exit_code == 0, result.output
    for name in ("rankings.csv", "rankings.md", "summary.md"):
        assert (rebuilt / name).read_bytes() == (output / name).read_bytes()


def test_run_missing_vintage_exits_with_config_code(generated, config_file, tmp_path):
    result = runner.invoke(app, [
        "run", "--config", str(config_file), "--data-dir", str(generated), "--output-dir", str(tmp_path),
        "--set", "vintages=[2009]",
    ])
    assert result.exit_code == 1
    assert "missing vintage file" in result.output


def test_run_rejects_unknown_key(config_file, tmp_path):
    result = runner.invoke(app, ["run", "--config", str(config_file), "--set", "bogus=1", "--output-dir", str(tmp_path)])
    assert result.exit_code == 1


def test_run_malformed_data_exits_with_data_code(generated, config_file, tmp_path):
    broken = tmp_path / "broken"
    broken.mkdir()
    for path in generated.iterdir():
        (broken / path.name).write_bytes(path.read_bytes())
    performance = broken / "sample_svcg_2004.txt"
    performance.write_text(performance.read_text(encoding="utf-8") + "F04|short\n", encoding="utf-8")
    result = runner.invoke(app, [
        "run", "--config", str(config_file), "--data-dir", str(broken), "--output-dir", str(tmp_path / "out"),
    ])
    assert result.exit_code == 2


def test_run_undecodable_data_exits_with_data_code(generated, config_file, tmp_path):
    broken = tmp_path / "broken"
    broken.mkdir()
    for path in generated.iterdir():
        (broken / path.name).write_bytes(path.read_bytes())
    performance = broken / "sample_svcg_2004.txt"
    performance.write_bytes(performance.read_bytes() + b"\xff\xfe|bad\n")
    output = tmp_path / "out"
    result = runner.invoke(app, [
        "run", "--config", str(config_file), "--data-dir", str(broken), "--output-dir", str(output),
    ])
    assert result.exit_code == 2
    assert (output / "manifest.json").is_file()


def test_report_missing_metrics(tmp_path):
    result = runner.invoke(app, ["report", str(tmp_path)])
    assert result.exit_code == 1


def test_inspect_prints_tables(generated, config_file):
    result = runner.invoke(app, [
        "inspect", "--config", str(config_file), "--data-dir", str(generated), "--set", "vintages=[2004, 2011]",
    ])
    assert result.exit_code == 0, result.output
    assert "Vintages" in result.output
    assert "Regimes" in result.output
