"""
Report artifacts: metrics CSV, ranking / comparison / best-worst tables
(CSV and markdown) and the timing tables
"""

import json
import logging
from pathlib import Path

import pandas as pd

from src.evaluation import (
    RANKING_METRICS,
    MetricsReport,
    Variant,
    best_worst,
    compare_variants,
    rank,
    timing_table,
)
from src.loan_data import Regime
from src.manager import ArtifactManager
from src.models import ModelKind

logger = logging.getLogger(__name__)

METRIC_TITLES = {"precision": "Precision", "recall": "Recall", "roc_auc": "ROC-AUC", "fpr": "FPR", "accuracy": "Accuracy"}
METRICS_COLUMNS = [
    "vintage_year", "regime", "model", "variant", "label",
    "precision", "recall", "fpr", "accuracy", "roc_auc",
    "tp", "fp", "fn", "tn", "holdout_checksum", "converged", "hyper_params", "error",
]
FIT_TIME_COLUMNS = ["vintage_year", "model", "variant", "fit_seconds"]
SCOPES: tuple[Regime | None, ...] = (None, Regime.MEDIUM, Regime.HIGH, Regime.LOW)

# deterministic artifacts
METRICS_FILE = "metrics.csv"
RANKINGS_FILE = "rankings.csv"
RANKINGS_MARKDOWN = "rankings.md"
COMPARISON_FILE = "comparison.csv"
BEST_WORST_FILE = "best_worst.csv"
SUMMARY_MARKDOWN = "summary.md"
# wall-clock artifacts
FIT_TIMES_FILE = "fit_times.csv"
TIMING_FILE = "timing.csv"
TIMING_MARKDOWN = "timing.md"


def _number(value: float | None) -> str:
    return "" if value is None else f"{value:.4f}"


def markdown_table(header: list[str], rows: list[list[str]]) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    lines += ["| " + " | ".join(row) + " |" for row in rows]
    return "\n".join(lines) + "\n"


def _scope_name(scope: Regime | None) -> str:
    return "Entire period" if scope is None else scope.value


def reports_frame(reports: list[MetricsReport]) -> pd.DataFrame:
    """
    Long form, one row per report; fit time is kept out
    """
    rows = []
    for report in reports:
        rows.append({
            "vintage_year": report.vintage_year,
            "regime": report.regime.value if report.regime else None,
            "model": report.kind.value,
            "variant": report.variant.value,
            "label": report.label,
            "precision": report.precision,
            "recall": report.recall,
            "fpr": report.fpr,
            "accuracy": report.accuracy,
            "roc_auc": report.roc_auc,
            "tp": report.tp,
            "fp": report.fp,
            "fn": report.fn,
            "tn": report.tn,
            "holdout_checksum": report.holdout_checksum,
            "converged": report.converged,
            "hyper_params": json.dumps(report.hyper_params, sort_keys=True),
            "error": report.error,
        })
    return pd.DataFrame(rows, columns=METRICS_COLUMNS)


def fit_times_frame(reports: list[MetricsReport]) -> pd.DataFrame:
    return pd.DataFrame(
        [[report.vintage_year, report.kind.value, report.variant.value, report.fit_seconds] for report in reports],
        columns=FIT_TIME_COLUMNS,
    )


def reports_from_frames(metrics: pd.DataFrame, fit_times: pd.DataFrame | None = None) -> list[MetricsReport]:
    """
    Rebuilds reports from a previous run's metrics.csv (and fit_times.csv)
    """
    seconds = {}
    if fit_times is not None:
        for row in fit_times.itertuples(index=False):
            seconds[(row.vintage_year, row.model, row.variant)] = float(row.fit_seconds)

    reports = []
    for row in metrics.astype(object).where(metrics.notna(), None).to_dict(orient="records"):
        year = int(row["vintage_year"]) if row["vintage_year"] is not None else None
        counts = {name: int(row[name]) if row[name] is not None else None for name in ("tp", "fp", "fn", "tn")}
        reports.append(MetricsReport(
            kind=ModelKind(row["model"]),
            variant=Variant(row["variant"]),
            vintage_year=year,
            regime=Regime(row["regime"]) if row["regime"] else None,
            precision=row["precision"],
            recall=row["recall"],
            fpr=row["fpr"],
            accuracy=row["accuracy"],
            roc_auc=row["roc_auc"],
            fit_seconds=seconds.get((year, row["model"], row["variant"]), 0.0),
            holdout_checksum=str(row["holdout_checksum"]),
            converged=bool(row["converged"]) if row["converged"] is not None else True,
            hyper_params=json.loads(row["hyper_params"]) if row["hyper_params"] else {},
            error=row["error"],
            **counts,
        ))
    return reports


def rankings_frame(reports: list[MetricsReport]) -> pd.DataFrame:
    rows = []
    for scope in SCOPES:
        for metric in RANKING_METRICS:
            for row in rank(reports, metric, scope):
                rows.append({
                    "scope": _scope_name(scope),
                    "metric": metric,
                    "rank": row.rank,
                    "label": row.label,
                    "value": row.value,
                    "n_vintages": row.n_vintages,
                })
    return pd.DataFrame(rows, columns=["scope", "metric", "rank", "label", "value", "n_vintages"])


def ranking_markdown(reports: list[MetricsReport]) -> str:
    """
    One three-metric ranking table per scope; empty regimes get a note
    """
    sections = ["# Rankings\n"]
    for scope in SCOPES:
        sections.append(f"## {_scope_name(scope)}\n")
        ranked = {metric: rank(reports, metric, scope) for metric in RANKING_METRICS}
        depth = max(len(rows) for rows in ranked.values())
        if depth == 0:
            sections.append(f"_No vintages in the {_scope_name(scope)} regime; table omitted._\n")
            continue
        header = ["Rank"]
        for metric in RANKING_METRICS:
            header += [f"Rank by {METRIC_TITLES[metric]}", METRIC_TITLES[metric]]
        rows = []
        for position in range(depth):
            cells = [str(position + 1)]
            for metric in RANKING_METRICS:
                row = ranked[metric][position] if position < len(ranked[metric]) else None
                cells += [row.label if row else "", _number(row.value) if row else ""]
            rows.append(cells)
        sections.append(markdown_table(header, rows))
    return "\n".join(sections)


def comparison_frame(reports: list[MetricsReport]) -> pd.DataFrame:
    return pd.DataFrame(
        [item.model_dump() for item in compare_variants(reports)],
        columns=["metric", "original", "resampled", "difference"],
    )


def best_worst_frame(reports: list[MetricsReport]) -> pd.DataFrame:
    rows = [item.model_dump() for scope in SCOPES for item in best_worst(reports, scope)]
    return pd.DataFrame(rows, columns=["metric", "scope", "best_label", "best_value", "worst_label", "worst_value"])


def summary_markdown(comparison: pd.DataFrame, extremes: pd.DataFrame) -> str:
    sections = ["# Original vs Resampled\n"]
    sections.append(markdown_table(
        ["Metric", "Original", "Resampled", "Difference"],
        [
            [METRIC_TITLES[row.metric], _number(row.original), _number(row.resampled), _number(row.difference)]
            for row in comparison.astype(object).where(comparison.notna(), None).itertuples(index=False)
        ],
    ))
    sections.append("\n# Best and worst\n")
    sections.append(markdown_table(
        ["Scope", "Metric", "Best", "Value", "Worst", "Value"],
        [
            [row.scope, METRIC_TITLES[row.metric], row.best_label or "", _number(row.best_value), row.worst_label or "", _number(row.worst_value)]
            for row in extremes.astype(object).where(extremes.notna(), None).itertuples(index=False)
        ],
    ))
    return "\n".join(sections)


def timing_frame(reports: list[MetricsReport]) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {"model": row.model.value, "original_seconds": row.original_seconds, "resampled_seconds": row.resampled_seconds, "mean_seconds": row.mean_seconds}
            for row in timing_table(reports)
        ],
        columns=["model", "original_seconds", "resampled_seconds", "mean_seconds"],
    )


def timing_markdown(timing: pd.DataFrame) -> str:
    rows = [
        [row.model, _number(row.original_seconds), _number(row.resampled_seconds), _number(row.mean_seconds)]
        for row in timing.astype(object).where(timing.notna(), None).itertuples(index=False)
    ]
    return "# Average fit time (seconds)\n\n" + markdown_table(["Model", "Original", "Resampled", "Average"], rows)


def write_reports(reports: list[MetricsReport], output_dir: Path) -> list[Path]:
    """
    Writes every report artifact and returns their paths
    """
    if not reports:
        raise ValueError("no reports to write")
    output_dir = Path(output_dir)
    paths = [
        ArtifactManager.write_frame(output_dir, METRICS_FILE, reports_frame(reports)),
        ArtifactManager.write_frame(output_dir, RANKINGS_FILE, rankings_frame(reports)),
        ArtifactManager.write_text(output_dir, RANKINGS_MARKDOWN, ranking_markdown(reports)),
    ]
    if {report.variant for report in reports} == set(Variant):
        comparison, extremes = comparison_frame(reports), best_worst_frame(reports)
        paths += [
            ArtifactManager.write_frame(output_dir, COMPARISON_FILE, comparison),
            ArtifactManager.write_frame(output_dir, BEST_WORST_FILE, extremes),
            ArtifactManager.write_text(output_dir, SUMMARY_MARKDOWN, summary_markdown(comparison, extremes)),
        ]
    else:
        logger.warning("Only one variant present; comparison tables skipped")

    timing = timing_frame(reports)
    paths += [
        ArtifactManager.write_frame(output_dir, FIT_TIMES_FILE, fit_times_frame(reports)),
        ArtifactManager.write_frame(output_dir, TIMING_FILE, timing),
        ArtifactManager.write_text(output_dir, TIMING_MARKDOWN, timing_markdown(timing)),
    ]
    logger.info("Wrote %d report artifact(s) to %s", len(paths), output_dir)
    return paths
