import json

import numpy as np
import pandas as pd
import pytest

from src.bench import (
    REGIME_DEFAULT_RATES,
    ExperimentConfig,
    SyntheticSpec,
    build_synthetic,
    check_files,
    config_hash,
    generate_synthetic,
    inspect_vintages,
    load_config,
    reports_from_frames,
    run,
    write_reports,
)
from src.bench.pipeline import MANIFEST_FILE, build_datasets, load_vintage, stage_seeds
from src.bench.reporting import METRICS_FILE, ranking_markdown, reports_frame
from src.bench.synthetic import write_layout
from src.evaluation import MetricsReport, SplitPlan, Variant, compare_variants, run_experiment_async
from src.exceptions import ConfigError, PipelineError
from src.loan_data import Diagnostics, Regime, join_and_label, parse_vintage
from src.loan_data.layout import ORIGINATION_LAYOUT, PERFORMANCE_LAYOUT
from src.models import MODEL_ORDER, ClassifierSpec, ModelKind
from src.resampling import ResampleConfig
from src.seeds import derive_seed

REPRODUCIBLE_FILES = ("metrics.csv", "rankings.csv", "rankings.md", "comparison.csv", "best_worst.csv", "summary.md")


def test_load_config_layers(tmp_path):
    path = tmp_path / "experiment.yaml"
    path.write_text("vintages: [2005, 2001]\nseed: 3\nresample:\n  k: 5\n", encoding="utf-8")
    config = load_config(path, ["resample.k=7", "customer_sample=500"], seed=9, workers=None)
    assert config.vintages == [2001, 2005]
    assert config.resample.k == 7
    assert config.customer_sample == 500
    assert config.seed == 9
    assert [spec.kind for spec in config.models] == list(MODEL_ORDER)


def test_load_config_rejects_unknown_key(tmp_path):
    path = tmp_path / "experiment.yaml"
    path.write_text("vintages: [2003]\nsmote_k: 5\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="smote_k"):
        load_config(path)


def test_load_config_missing_file(tmp_path):
    missing = tmp_path / "absent.yaml"
    with pytest.raises(ConfigError, match="absent.yaml"):
        load_config(missing)


@pytest.mark.parametrize("overrides", [["vintages"], ["vintages=[1998]"], ["vintages=[2003, 2003]"]])
def test_load_config_bad_overrides(overrides):
    with pytest.raises(ConfigError):
        load_config(None, overrides)


def test_load_config_rejects_empty_model_list():
    with pytest.raises(ConfigError, match="models"):
        load_config(None, ["vintages=[2003]", "models=[]"])


def test_config_hash_is_stable():
    first = ExperimentConfig(vintages=[2003, 2008])
    second = ExperimentConfig(vintages=[2008, 2003])
    assert config_hash(first) == config_hash(second)
    assert config_hash(first) != config_hash(ExperimentConfig(vintages=[2003]))


def test_stage_seeds_depend_on_year():
    seeds = stage_seeds(ExperimentConfig(vintages=[2003, 2008], seed=4))
    assert seeds["split.2003"] != seeds["split.2008"]
    assert seeds == stage_seeds(ExperimentConfig(vintages=[2003, 2008], seed=4))


def test_check_files_names_missing_path(tmp_path):
    with pytest.raises(ConfigError, match="sample_orig_2004.txt"):
        check_files(ExperimentConfig(vintages=[2004], data_dir=tmp_path))


def test_synthetic_without_defaults():
    _, performance = build_synthetic(SyntheticSpec(vintage_year=2012, customer_count=200, rows_per_customer=20, default_rate=0.0))
    assert not performance["zero_balance_code"].isin(["03", "06", "09"]).any()


def test_synthetic_high_regime_preset(tmp_path):
    spec = SyntheticSpec(vintage_year=2008, customer_count=1000, rows_per_customer=45, seed=21)
    origination_path, performance_path = generate_synthetic(spec, tmp_path)
    parsed = parse_vintage(origination_path.read_bytes(), performance_path.read_bytes(), vintage_year=2008)
    labeled = join_and_label(parsed.origination, parsed.performance, 2008)
    assert labeled["regime"].eq(Regime.HIGH.value).all()
    assert abs(labeled["defaulted"].mean() - 0.0009) <= 0.0003


def test_synthetic_files_parse_back_unchanged(tmp_path):
    origination_path, performance_path = generate_synthetic(
        SyntheticSpec(vintage_year=2003, customer_count=50, rows_per_customer=6, default_rate=0.02, seed=5), tmp_path,
    )
    parsed = parse_vintage(origination_path.read_bytes(), performance_path.read_bytes(), vintage_year=2003)
    assert parsed.issues == []
    assert parsed.unparseable_cells == 0
    rewritten = tmp_path / "again"
    assert write_layout(parsed.origination, ORIGINATION_LAYOUT, rewritten / "orig.txt").read_bytes() == origination_path.read_bytes()
    assert write_layout(parsed.performance, PERFORMANCE_LAYOUT, rewritten / "svcg.txt").read_bytes() == performance_path.read_bytes()


def test_synthetic_is_seeded():
    first = build_synthetic(SyntheticSpec(vintage_year=2015, customer_count=80, rows_per_customer=5, seed=3))
    second = build_synthetic(SyntheticSpec(vintage_year=2015, customer_count=80, rows_per_customer=5, seed=3))
    pd.testing.assert_frame_equal(first[1], second[1])


def test_inspect_vintages(small_config):
    stats = inspect_vintages(small_config(vintages=[2003, 2008]))
    assert stats["vintage_year"].tolist() == [2003, 2008]
    assert stats["regime"].tolist() == ["Medium", "High"]
    assert (stats["customers"] <= 300).all()
    assert (stats["default_rate"] > 0).all()


def test_run_writes_reports_and_manifest(small_config):
    config = small_config()
    result = run(config)
    assert result.exit_code == 0
    assert len(result.manifest.reports) == 4
    assert result.manifest.complete

    output = config.output_dir
    manifest = json.loads((output / MANIFEST_FILE).read_text(encoding="utf-8"))
    assert manifest["config_hash"] == config_hash(config)
    assert set(REPRODUCIBLE_FILES) <= set(manifest["files"])
    assert "diagnostics.csv" in manifest["files"]

    metrics = pd.read_csv(output / METRICS_FILE)
    assert metrics["label"].tolist() == ["LR", "LR-R", "DT", "DT-R"]
    assert metrics["holdout_checksum"].nunique() == 1


def test_run_is_reproducible(small_config, tmp_path):
    first = run(small_config(output_dir=tmp_path / "first"))
    second = run(small_config(output_dir=tmp_path / "second"))
    assert first.exit_code == second.exit_code == 0
    for name in REPRODUCIBLE_FILES:
        assert (tmp_path / "first" / name).read_bytes() == (tmp_path / "second" / name).read_bytes(), name


def test_run_partial_when_a_cell_fails(small_config):
    config = small_config(grids={"DT": {"no_such_param": [1, 2]}})
    result = run(config)
    failed = [cell for cell in result.manifest.reports if cell.error]
    assert result.exit_code == 3
    assert not result.manifest.complete
    assert [(cell.model, cell.variant) for cell in failed] == [("DT", "Original"), ("DT", "Resampled")]
    assert (config.output_dir / METRICS_FILE).is_file()


def test_run_aborts_on_bad_features(small_config):
    config = small_config(features=["credit_score", "no_such_field"])
    with pytest.raises(PipelineError) as error:
        run(config)
    assert error.value.stage == "encode"
    manifest = json.loads((config.output_dir / MANIFEST_FILE).read_text(encoding="utf-8"))
    assert manifest["failed_stage"] == "encode"
    assert manifest["complete"] is False


def test_run_aborts_on_undecodable_vintage(small_config, synthetic_data_dir, tmp_path):
    broken = tmp_path / "broken"
    broken.mkdir()
    for path in synthetic_data_dir.iterdir():
        (broken / path.name).write_bytes(path.read_bytes())
    performance = broken / "sample_svcg_2003.txt"
    performance.write_bytes(performance.read_bytes() + b"\xff\xfe|bad\n")

    config = small_config(data_dir=broken)
    with pytest.raises(PipelineError) as error:
        run(config)
    assert error.value.stage == "parse"
    assert error.value.exit_code == 2
    manifest = json.loads((config.output_dir / MANIFEST_FILE).read_text(encoding="utf-8"))
    assert manifest["failed_stage"] == "parse"
    assert manifest["complete"] is False


def test_vintages_share_one_vocabulary(small_config):
    config = small_config(vintages=[2003, 2008])
    samples = [load_vintage(config, year, Diagnostics(vintage_year=year)) for year in config.vintages]
    datasets, pooled = build_datasets(config, samples)
    column = pooled.feature_names.index("property_state")
    codes: dict[str, set[float]] = {}
    for sample, data in zip(samples, datasets):
        assert data.feature_names == pooled.feature_names
        for state, code in zip(sample["property_state"], data.X[:, column]):
            codes.setdefault(str(state), set()).add(float(code))
    assert all(len(seen) == 1 for seen in codes.values())
    assert len({seen.pop() for seen in codes.values()}) == len(codes)


def test_run_with_feature_selection(small_config):
    config = small_config(
        feature_selection={"enabled": True, "forest": {"n_estimators": 10}, "ga": {"population_size": 6, "generations": 3}},
        models=[{"kind": "NB"}],
    )
    result = run(config)
    verdicts = pd.read_csv(config.output_dir / "feature_verdicts.csv")
    assert result.exit_code == 0
    assert verdicts.columns.tolist() == ["feature", "wrapper", "filter", "ga_survived", "discarded"]


def test_reports_round_trip_through_csv(small_config):
    config = small_config(vintages=[2003, 2008])
    result = run(config)
    restored = reports_from_frames(pd.read_csv(config.output_dir / METRICS_FILE))
    # metrics.csv keeps ten significant digits
    pd.testing.assert_frame_equal(reports_frame(restored), reports_frame(result.reports), check_exact=False, rtol=1e-8)


def report(kind, variant, year, regime, **values):
    return MetricsReport(kind=kind, variant=variant, vintage_year=year, regime=regime, holdout_checksum="h", **values)


def test_rough_set_auc_is_blank(tmp_path):
    reports = [
        report(ModelKind.RS, Variant.ORIGINAL, 2003, Regime.MEDIUM, recall=0.5, precision=0.1),
        report(ModelKind.RS, Variant.RESAMPLED, 2003, Regime.MEDIUM, recall=0.6, precision=0.1),
    ]
    write_reports(reports, tmp_path)
    metrics = pd.read_csv(tmp_path / METRICS_FILE)
    assert metrics["roc_auc"].isna().all()
    rankings = pd.read_csv(tmp_path / "rankings.csv")
    assert rankings.loc[rankings["metric"] == "roc_auc", "value"].isna().all()


def test_ranking_markdown_notes_empty_regimes():
    text = ranking_markdown([report(ModelKind.LR, Variant.ORIGINAL, 2003, Regime.MEDIUM, recall=0.5)])
    assert "## Medium" in text
    assert "No vintages in the High regime" in text
    assert "No vintages in the Low regime" in text


def test_write_reports_single_variant_skips_comparison(tmp_path):
    paths = write_reports([report(ModelKind.LR, Variant.ORIGINAL, 2011, Regime.LOW, recall=0.2)], tmp_path)
    names = {path.name for path in paths}
    assert "comparison.csv" not in names
    assert {"metrics.csv", "rankings.md", "timing.md"} <= names


@pytest.mark.asyncio
async def test_run_experiment_async(dataset_factory):
    rng = np.random.default_rng(6)
    y = np.r_[np.ones(12, dtype=int), np.zeros(88, dtype=int)]
    data = dataset_factory(rng.normal(size=(100, 2)) + y[:, None], y, vintage_year=2010, regime=Regime.HIGH)
    reports = await run_experiment_async([data], [ClassifierSpec(kind=ModelKind.NB)], ResampleConfig(), SplitPlan(), workers=1)
    assert [r.variant for r in reports] == [Variant.ORIGINAL, Variant.RESAMPLED]


@pytest.mark.slow
def test_resampling_lifts_recall(tmp_path):
    vintages = {2003: Regime.MEDIUM, 2008: Regime.HIGH, 2014: Regime.LOW}
    light = {
        ModelKind.RF: {"n_estimators": 20},
        ModelKind.ET: {"n_estimators": 20},
        ModelKind.AB: {"n_estimators": 20},
        ModelKind.GB: {"n_estimators": 30},
        ModelKind.GA: {"population_size": 6, "generations": 3, "fitness_estimators": 3, "n_estimators": 20},
    }
    models = [{"kind": kind.value, "hyper_params": light.get(kind, {})} for kind in MODEL_ORDER if kind != ModelKind.RS]

    lifted = 0
    for seed in range(10):
        data_dir = tmp_path / f"data{seed}"
        for year, regime in vintages.items():
            generate_synthetic(
                SyntheticSpec(
                    vintage_year=year,
                    customer_count=2000,
                    rows_per_customer=45,
                    default_rate=REGIME_DEFAULT_RATES[regime],
                    seed=derive_seed(seed, "synthetic", year),
                ),
                data_dir,
            )
        config = ExperimentConfig(
            data_dir=data_dir,
            output_dir=tmp_path / f"run{seed}",
            vintages=list(vintages),
            models=models,
            feature_selection={"enabled": False},
            seed=seed,
        )
        recall = next(row for row in compare_variants(run(config).reports) if row.metric == "recall")
        lifted += recall.resampled > recall.original
    assert lifted >= 9


@pytest.mark.slow
def test_timing_covers_every_model(small_config):
    config = small_config(models=[{"kind": kind.value} for kind in MODEL_ORDER])
    result = run(config)
    timing = pd.read_csv(config.output_dir / "timing.csv")
    assert len(result.reports) == 24
    assert timing["model"].tolist() == [kind.value for kind in MODEL_ORDER]
