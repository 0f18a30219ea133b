"""
Ranking and summary tables over metric reports
"""

import math
from collections import defaultdict

from src.exceptions import EvaluationError
from src.loan_data import Regime
from src.models import MODEL_ORDER, ModelKind

from .schemas import (
    RANKING_METRICS,
    REPORT_METRICS,
    BestWorst,
    MetricsReport,
    RankedRow,
    TimingRow,
    Variant,
    VariantComparison,
)


def _mean(values: list[float]) -> float | None:
    # fsum keeps the average independent of report order
    return math.fsum(values) / len(values) if values else None


def in_scope(reports: list[MetricsReport], scope: Regime | None) -> list[MetricsReport]:
    return [report for report in reports if scope is None or report.regime == scope]


def rank(reports: list[MetricsReport], metric: str, scope: Regime | None = None) -> list[RankedRow]:
    """
    Averages `metric` per (model, variant) over the scope's vintages
    (None = entire period) and sorts best first, ties by label.
    Accuracy is deliberately not rankable. Labels whose metric is
    undefined in every vintage go last with value None.
    """
    if metric not in RANKING_METRICS:
        raise EvaluationError(f"cannot rank by {metric!r}; choose one of {', '.join(RANKING_METRICS)}")
    if not reports:
        raise EvaluationError("no reports to rank")

    values: dict[tuple[ModelKind, Variant], list[float]] = defaultdict(list)
    for report in in_scope(reports, scope):
        values.setdefault((report.kind, report.variant), [])
        value = getattr(report, metric)
        if value is not None and report.error is None:
            values[(report.kind, report.variant)].append(value)

    rows = []
    for (kind, variant), defined in values.items():
        label = kind.value + ("-R" if variant == Variant.RESAMPLED else "")
        rows.append((label, kind, variant, _mean(defined), len(defined)))
    rows.sort(key=lambda row: (row[3] is None, -(row[3] or 0.0), row[0]))

    return [
        RankedRow(rank=position, label=label, kind=kind, variant=variant, value=value, n_vintages=count)
        for position, (label, kind, variant, value, count) in enumerate(rows, start=1)
    ]


def compare_variants(reports: list[MetricsReport]) -> list[VariantComparison]:
    """
    Grand mean of each metric over all (model, vintage) cells, per variant
    """
    present = {report.variant for report in reports}
    if present != set(Variant):
        raise EvaluationError("variant comparison needs both Original and Resampled reports")

    comparison = []
    for metric in REPORT_METRICS:
        means = {}
        for variant in Variant:
            defined = [
                getattr(report, metric) for report in reports
                if report.variant == variant and report.error is None and getattr(report, metric) is not None
            ]
            means[variant] = _mean(defined)
        original, resampled = means[Variant.ORIGINAL], means[Variant.RESAMPLED]
        difference = resampled - original if original is not None and resampled is not None else None
        comparison.append(VariantComparison(metric=metric, original=original, resampled=resampled, difference=difference))
    return comparison


def best_worst(reports: list[MetricsReport], scope: Regime | None = None) -> list[BestWorst]:
    """
    Best and worst (model, variant) per ranking metric within the scope
    """
    scope_name = "Entire period" if scope is None else scope.value
    summary = []
    for metric in RANKING_METRICS:
        defined = [row for row in rank(reports, metric, scope) if row.value is not None]
        best, worst = (defined[0], defined[-1]) if defined else (None, None)
        summary.append(BestWorst(
            metric=metric,
            scope=scope_name,
            best_label=best.label if best else None,
            best_value=best.value if best else None,
            worst_label=worst.label if worst else None,
            worst_value=worst.value if worst else None,
        ))
    return summary


def timing_table(reports: list[MetricsReport]) -> list[TimingRow]:
    """
    Average fit seconds per model over vintages, per variant and overall
    """
    seconds: dict[tuple[ModelKind, Variant], list[float]] = defaultdict(list)
    for report in reports:
        if report.error is None:
            seconds[(report.kind, report.variant)].append(report.fit_seconds)

    rows = []
    for kind in MODEL_ORDER:
        original = seconds.get((kind, Variant.ORIGINAL), [])
        resampled = seconds.get((kind, Variant.RESAMPLED), [])
        if not original and not resampled:
            continue
        rows.append(TimingRow(
            model=kind,
            original_seconds=_mean(original),
            resampled_seconds=_mean(resampled),
            mean_seconds=_mean(original + resampled),
        ))
    return rows
