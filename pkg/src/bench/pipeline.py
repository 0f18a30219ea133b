"""
End-to-end run: parse, label, clean, sample, encode, select features,
split, fit/evaluate both variants, report. Each stage is tagged so a
failure names where it happened.
"""

import logging
from contextlib import contextmanager
from functools import partial
from importlib import metadata
from pathlib import Path
from typing import Iterator

import anyio
import pandas as pd
from pydantic import BaseModel, ConfigDict

from src.evaluation import MetricsReport, SplitPlan, evaluate_splits_async, prepare_splits
from src.exceptions import PipelineError
from src.feature_selection import select_features, verdict_frame
from src.loan_data import Dataset, Diagnostics, Encoder, clean, default_feature_names, join_and_label, parse_vintage_files, stratified_sample
from src.logs import attach_run_log, detach_run_log
from src.manager import ArtifactManager
from src.models import MODEL_ORDER, ClassifierSpec
from src.seeds import derive_seed

from .config import check_files, config_hash, vintage_paths
from .reporting import write_reports
from .schemas import ExperimentConfig, ManifestCell, RunManifest

logger = logging.getLogger(__name__)

LIBRARIES = ("numpy", "pandas", "scipy", "scikit-learn", "pydantic", "anyio", "PyYAML")
MANIFEST_FILE = "manifest.json"
RUN_LOG = "run.log"
DIAGNOSTICS_FILE = "diagnostics.csv"
VERDICTS_FILE = "feature_verdicts.csv"

EXIT_OK = 0
EXIT_PARTIAL = 3


class RunResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    exit_code: int
    manifest: RunManifest
    reports: list[MetricsReport] = []


@contextmanager
def stage(name: str) -> Iterator[None]:
    logger.info("Stage %s", name)
    try:
        yield
    except PipelineError:
        raise
    except Exception as error:
        raise PipelineError(name, error) from error


def library_versions() -> dict[str, str]:
    versions = {}
    for name in LIBRARIES:
        try:
            versions[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            versions[name] = "unknown"
    return versions


def stage_seeds(config: ExperimentConfig) -> dict[str, int]:
    root = config.seed
    seeds = {"forest": derive_seed(root, "forest"), "ga": derive_seed(root, "ga")}
    for year in config.vintages:
        for name in ("sample", "split", "smote"):
            seeds[f"{name}.{year}"] = derive_seed(root, name, year)
    return seeds


def model_specs(config: ExperimentConfig) -> list[ClassifierSpec]:
    """
    Configured specs; a spec without an explicit seed gets one derived
    from the root seed and its model kind
    """
    specs = []
    for spec in config.models:
        if "seed" in spec.model_fields_set:
            specs.append(spec)
        else:
            seed = derive_seed(config.seed, "model", MODEL_ORDER.index(spec.kind))
            specs.append(ClassifierSpec(kind=spec.kind, hyper_params=spec.hyper_params, seed=seed))
    return specs


def load_vintage(config: ExperimentConfig, year: int, diagnostics: Diagnostics) -> pd.DataFrame:
    """
    Parsed, labeled, cleaned and customer-sampled rows of one vintage
    """
    origination_path, performance_path = vintage_paths(config.data_dir, year)
    with stage("parse"):
        parsed = parse_vintage_files(origination_path, performance_path, vintage_year=year, strict=config.strict_parsing)
    diagnostics.origination_rows = len(parsed.origination)
    diagnostics.performance_rows = len(parsed.performance)
    diagnostics.malformed_lines = len(parsed.issues)
    diagnostics.unparseable_cells = parsed.unparseable_cells

    with stage("label"):
        labeled = join_and_label(parsed.origination, parsed.performance, year, diagnostics)
    with stage("clean"):
        cleaned = clean(labeled, diagnostics)
    with stage("sample"):
        available = cleaned["loan_sequence_number"].nunique()
        count = min(config.customer_sample, available)
        if count < config.customer_sample:
            logger.warning("Vintage %d has only %d customers; sampling all of them", year, available)
        sampled = stratified_sample(cleaned, count, derive_seed(config.seed, "sample", year))
    diagnostics.sampled_customers = int(sampled["loan_sequence_number"].nunique())
    diagnostics.sampled_rows = len(sampled)
    return sampled


def build_datasets(config: ExperimentConfig, samples: list[pd.DataFrame]) -> tuple[list[Dataset], Dataset]:
    """
    Encodes every vintage with one vocabulary fitted on the pooled sample
    """
    with stage("encode"):
        pooled = pd.concat(samples, ignore_index=True)
        encoder = Encoder.fit(pooled, config.features or default_feature_names())
        return [encoder.transform(sample) for sample in samples], encoder.transform(pooled)


def _write_manifest(config: ExperimentConfig, manifest: RunManifest, written: list[Path]) -> None:
    output_dir = Path(config.output_dir)
    manifest.files = {
        path.relative_to(output_dir).as_posix(): ArtifactManager.content_hash(path)
        for path in sorted(set(written))
        if path.exists()
    }
    ArtifactManager.write_json(output_dir, MANIFEST_FILE, manifest.model_dump(mode="json"))


def run(config: ExperimentConfig) -> RunResult:
    """
    Executes the whole experiment and writes its artifacts. Returns exit
    code 0 when every cell succeeded and 3 when some cells failed. Any
    abort raises PipelineError, tagged with the stage, after the manifest
    is written with `complete: false`.
    """
    check_files(config)
    output_dir = Path(config.output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    handler = attach_run_log(output_dir / RUN_LOG)
    manifest = RunManifest(
        config_hash=config_hash(config),
        seed=config.seed,
        stage_seeds=stage_seeds(config),
        libraries=library_versions(),
    )
    written: list[Path] = [output_dir / RUN_LOG]

    try:
        diagnostics = [Diagnostics(vintage_year=year) for year in config.vintages]
        samples = [load_vintage(config, year, diag) for year, diag in zip(config.vintages, diagnostics)]
        written.append(ArtifactManager.write_frame(
            output_dir, DIAGNOSTICS_FILE, pd.concat([diag.to_frame() for diag in diagnostics], ignore_index=True),
        ))

        datasets, pooled = build_datasets(config, samples)
        with stage("select"):
            retained, verdicts = select_features(
                pooled,
                config.feature_selection,
                forest_seed=manifest.stage_seeds["forest"],
                ga_seed=manifest.stage_seeds["ga"],
            )
        if verdicts:
            written.append(ArtifactManager.write_frame(output_dir, VERDICTS_FILE, verdict_frame(verdicts)))
        datasets = [data.select_features(retained) for data in datasets]
        if config.snapshot_datasets:
            for data in datasets:
                written.append(ArtifactManager.write_frame(output_dir, f"dataset_{data.vintage_year}.csv", data.to_frame()))

        with stage("split"):
            splits = prepare_splits(
                datasets,
                SplitPlan(holdout_fraction=config.holdout_fraction, stratified=config.stratified, seed=config.seed),
                config.resample.model_copy(update={"seed": config.seed}),
            )
        if config.resample.dump_provenance:
            for vintage in splits:
                if vintage.provenance is not None:
                    written.append(ArtifactManager.write_frame(output_dir, f"synthetic_{vintage.vintage_year}.csv", vintage.provenance))

        with stage("experiment"):
            reports = anyio.run(partial(
                evaluate_splits_async,
                splits,
                model_specs(config),
                grids=config.grids,
                folds=config.grid_folds,
                workers=config.workers,
            ))
        with stage("report"):
            written += write_reports(reports, output_dir)
    except Exception as error:
        failure = error if isinstance(error, PipelineError) else PipelineError("run", error)
        manifest.failed_stage = failure.stage
        logger.error("Run aborted: %s", failure)
        detach_run_log(handler)
        _write_manifest(config, manifest, written)
        if failure is error:
            raise
        raise failure from error
    except BaseException:
        detach_run_log(handler)
        raise

    manifest.reports = [
        ManifestCell(vintage_year=report.vintage_year, model=report.kind.value, variant=report.variant.value, error=report.error)
        for report in reports
    ]
    failed = sum(report.error is not None for report in reports)
    manifest.complete = failed == 0
    if failed:
        logger.warning("%d of %d experiment cell(s) failed", failed, len(reports))
    logger.info("Run finished: %d report(s)", len(reports))
    detach_run_log(handler)
    _write_manifest(config, manifest, written)
    return RunResult(exit_code=EXIT_OK if manifest.complete else EXIT_PARTIAL, manifest=manifest, reports=reports)


def inspect_vintages(config: ExperimentConfig) -> pd.DataFrame:
    """
    Rows, customers and default counts per vintage after cleaning,
    before sampling
    """
    check_files(config)
    rows = []
    for year in config.vintages:
        origination_path, performance_path = vintage_paths(config.data_dir, year)
        parsed = parse_vintage_files(origination_path, performance_path, vintage_year=year, strict=config.strict_parsing)
        cleaned = clean(join_and_label(parsed.origination, parsed.performance, year))
        status = cleaned.groupby("loan_sequence_number")["defaulted"].max()
        rows.append({
            "vintage_year": year,
            "regime": cleaned["regime"].iloc[0] if len(cleaned) else None,
            "rows": len(cleaned),
            "customers": len(status),
            "default_rows": int(cleaned["defaulted"].sum()),
            "defaulting_customers": int(status.sum()),
        })
    frame = pd.DataFrame(rows, columns=["vintage_year", "regime", "rows", "customers", "default_rows", "defaulting_customers"])
    frame["default_rate"] = (frame["default_rows"] / frame["rows"].where(frame["rows"] > 0)).astype(float)
    return frame
