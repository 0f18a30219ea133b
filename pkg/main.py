"""
Main program module
"""

from pathlib import Path
from typing import Optional

import typer
from rich.console import Console
from rich.table import Table

from src.bench import (
    SyntheticSpec,
    generate_synthetic,
    inspect_vintages,
    load_config,
    reports_from_frames,
    run,
    write_reports,
)
from src.bench.reporting import FIT_TIMES_FILE, METRICS_FILE
from src.environs import DATA_DIR, LOG_LEVEL
from src.exceptions import ConfigError, LoanBenchError
from src.logs import setup_logging
from src.manager import ArtifactManager
from src.seeds import derive_seed

app = typer.Typer(help="Loan default benchmark: original vs SMOTE-resampled training across twelve classifiers.")
console = Console()


def _fail(error: LoanBenchError) -> None:
    console.print(f"[bold red]error:[/bold red] {error}")
    raise typer.Exit(code=error.exit_code)


@app.command("run")
def run_command(
    config: Optional[Path] = typer.Option(None, "--config", "-c", help="YAML experiment config"),
    overrides: Optional[list[str]] = typer.Option(None, "--set", help="Override a config key: dotted.key=value"),
    data_dir: Optional[Path] = typer.Option(None, "--data-dir"),
    output_dir: Optional[Path] = typer.Option(None, "--output-dir"),
    seed: Optional[int] = typer.Option(None, "--seed"),
    workers: Optional[int] = typer.Option(None, "--workers"),
    log_level: str = typer.Option(LOG_LEVEL, "--log-level"),
):
    """
    Runs the full experiment and writes reports and the manifest
    """
    setup_logging(log_level)
    try:
        experiment = load_config(
            config, overrides, data_dir=data_dir, output_dir=output_dir, seed=seed, workers=workers,
        )
        result = run(experiment)
    except LoanBenchError as error:
        _fail(error)

    failed = [cell for cell in result.manifest.reports if cell.error]
    console.print(f"{len(result.reports)} report(s) written to {experiment.output_dir}")
    if failed:
        console.print(f"[yellow]{len(failed)} cell(s) failed; manifest flagged incomplete[/yellow]")
    raise typer.Exit(code=result.exit_code)


@app.command("generate")
def generate_command(
    years: list[int] = typer.Argument(..., help="Vintage years to generate"),
    customers: int = typer.Option(2000, "--customers"),
    rows_per_customer: float = typer.Option(45.0, "--rows-per-customer"),
    default_rate: Optional[float] = typer.Option(None, "--default-rate", help="Joined-row default rate; regime preset when omitted"),
    feature_count: int = typer.Option(4, "--feature-count"),
    seed: int = typer.Option(0, "--seed"),
    data_dir: Path = typer.Option(Path(DATA_DIR), "--data-dir"),
    log_level: str = typer.Option(LOG_LEVEL, "--log-level"),
):
    """
    Writes synthetic origination and performance files
    """
    setup_logging(log_level)
    for year in years:
        try:
            spec = SyntheticSpec(
                vintage_year=year,
                customer_count=customers,
                rows_per_customer=rows_per_customer,
                default_rate=default_rate,
                feature_count=feature_count,
                seed=derive_seed(seed, "synthetic", year),
            )
        except ValueError as error:
            _fail(ConfigError(str(error)))
        try:
            paths = generate_synthetic(spec, data_dir)
        except OSError as error:
            _fail(ConfigError(f"cannot write to {data_dir}: {error}"))
        console.print(f"{year}: " + ", ".join(str(path) for path in paths))


@app.command("report")
def report_command(
    input_dir: Path = typer.Argument(..., help="Output directory of a previous run"),
    output_dir: Optional[Path] = typer.Option(None, "--output-dir", help="Defaults to the input directory"),
    log_level: str = typer.Option(LOG_LEVEL, "--log-level"),
):
    """
    Rebuilds ranking, comparison and timing tables from a metrics CSV
    """
    setup_logging(log_level)
    metrics_path = input_dir / METRICS_FILE
    if not metrics_path.is_file():
        _fail(ConfigError(f"missing metrics file: {metrics_path}"))
    times_path = input_dir / FIT_TIMES_FILE
    fit_times = ArtifactManager.read_frame(times_path) if times_path.is_file() else None
    try:
        reports = reports_from_frames(ArtifactManager.read_frame(metrics_path), fit_times)
        paths = write_reports(reports, output_dir or input_dir)
    except LoanBenchError as error:
        _fail(error)
    for path in paths:
        console.print(str(path))


@app.command("inspect")
def inspect_command(
    config: Optional[Path] = typer.Option(None, "--config", "-c"),
    overrides: Optional[list[str]] = typer.Option(None, "--set"),
    data_dir: Optional[Path] = typer.Option(None, "--data-dir"),
    log_level: str = typer.Option("WARNING", "--log-level"),
):
    """
    Prints row, customer and class-ratio statistics per vintage and regime
    """
    setup_logging(log_level)
    try:
        stats = inspect_vintages(load_config(config, overrides, data_dir=data_dir))
    except LoanBenchError as error:
        _fail(error)

    table = Table(title="Vintages")
    for column in ("Vintage", "Regime", "Rows", "Customers", "Default rows", "Defaulting customers", "Default rate"):
        table.add_column(column, justify="right")
    for row in stats.itertuples(index=False):
        table.add_row(
            str(row.vintage_year), str(row.regime), str(row.rows), str(row.customers),
            str(row.default_rows), str(row.defaulting_customers), f"{row.default_rate:.4%}",
        )
    console.print(table)

    regimes = stats.groupby("regime", sort=False)[["rows", "customers", "default_rows", "defaulting_customers"]].sum()
    summary = Table(title="Regimes")
    for column in ("Regime", "Rows", "Customers", "Default rows", "Default rate"):
        summary.add_column(column, justify="right")
    for regime, row in regimes.iterrows():
        rate = row["default_rows"] / row["rows"] if row["rows"] else 0.0
        summary.add_row(str(regime), str(row["rows"]), str(row["customers"]), str(row["default_rows"]), f"{rate:.4%}")
    console.print(summary)


if __name__ == "__main__":
    app()
